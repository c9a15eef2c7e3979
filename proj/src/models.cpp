#include "models.hpp"

namespace cbt {

std::unique_ptr<ActionModel> make_model(const ActionDecl& decl, std::uint64_t stream_seed) {
    switch (decl.kind) {
        case ActionDecl::Kind::Stochastic:
            return std::make_unique<StochasticLinearAction>(decl.rate, decl.noise,
                                                            RngStream(stream_seed), decl.start);
        case ActionDecl::Kind::Profile:
            return std::make_unique<ProfileAction>(decl.rate, decl.start);
        case ActionDecl::Kind::Perpetual:
            return std::make_unique<PerpetualAction>();
        case ActionDecl::Kind::Battery:
            return std::make_unique<BatteryAction>(decl.rate, decl.uses, decl.start);
    }
    return nullptr;
}

}  // namespace cbt
