#include "sim.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dsl.hpp"

namespace cbt {

std::uint64_t default_cycle_cap(const Document& doc) {
    double slowest_rate = 1.0;
    bool any = false;
    for (const auto& [name, decl] : doc.actions) {
        if (decl.kind == ActionDecl::Kind::Perpetual) continue;
        if (decl.rate > 0.0) {
            slowest_rate = any ? std::min(slowest_rate, decl.rate) : decl.rate;
            any = true;
        }
    }
    if (!any) return 10000;
    return static_cast<std::uint64_t>(10.0 * std::ceil(1.0 / slowest_rate));
}

TickTrace run_once(const Document& doc, std::uint64_t seed, std::uint64_t max_cycles) {
    if (max_cycles == 0) max_cycles = default_cycle_cap(doc);
    Engine engine(doc, {.seed = seed, .model_override = {}});
    auto result = engine.run(max_cycles);
    if (!result.completed) {
        std::ostringstream msg;
        msg << "run aborted after " << result.cycles << " cycles without completing";
        throw AbortedRun(msg.str(), std::move(result.trace));
    }
    return std::move(result.trace);
}

std::string trace_csv(const TickTrace& trace) {
    std::ostringstream os;
    os << "cycle,kind,id,label,status,progress,ticked,holder\n";
    for (std::size_t k = 0; k < trace.cycles.size(); ++k) {
        const auto& rec = trace.cycles[k];
        for (std::size_t id = 0; id < trace.node_labels.size(); ++id) {
            os << k + 1 << ",node," << id << ',' << trace.node_labels[id] << ',';
            if (rec.status[id] >= 0) os << to_string(static_cast<Status>(rec.status[id]));
            os << ',' << dsl::format_number(rec.progress[id]) << ','
               << int(rec.ticked[id]) << ",\n";
        }
        for (std::size_t r = 0; r < trace.resource_names.size(); ++r) {
            os << k + 1 << ",resource," << r << ',' << trace.resource_names[r] << ",,,,";
            if (rec.holder[r] >= 0) os << rec.holder[r];
            os << '\n';
        }
    }
    return os.str();
}

void write_trace_csv(const TickTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open trace output file: " + path);
    out << trace_csv(trace);
    if (!out) throw std::runtime_error("failed writing trace output file: " + path);
}

}  // namespace cbt
