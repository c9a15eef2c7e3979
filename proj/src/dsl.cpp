#include "dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace cbt::dsl {

std::string Diagnostic::format(std::string_view file) const {
    std::ostringstream os;
    os << file << ':' << span.line << ':' << span.column << ": " << code << ": " << message;
    return os.str();
}

std::string format_number(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

namespace {

enum class Tok { Ident, Number, LParen, RParen, LBrace, RBrace, LBracket, RBracket, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    double number = 0.0;
    SourceSpan span;
};

// Commas are trivia: the grammar is whitespace-insensitive and commas only
// ever separate list elements, so the lexer drops them like spaces.
class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_trivia();
        Token t;
        t.span = here();
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        switch (c) {
            case '(': t.kind = Tok::LParen; advance(); return t;
            case ')': t.kind = Tok::RParen; advance(); return t;
            case '{': t.kind = Tok::LBrace; advance(); return t;
            case '}': t.kind = Tok::RBrace; advance(); return t;
            case '[': t.kind = Tok::LBracket; advance(); return t;
            case ']': t.kind = Tok::RBracket; advance(); return t;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '.' || text_[pos_] == '-' || text_[pos_] == '+' ||
                    text_[pos_] == 'e' || text_[pos_] == 'E'))
                advance();
            t.text = text_.substr(start, pos_ - start);
            auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
            t.kind = (res.ec == std::errc{} && res.ptr == t.text.data() + t.text.size())
                         ? Tok::Number
                         : Tok::Bad;
            return t;
        }
        if (is_ident_char(c)) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
            // A trailing '*' belongs to the memory-node keywords seq* / fb*.
            if (pos_ < text_.size() && text_[pos_] == '*') advance();
            t.kind = Tok::Ident;
            t.text = text_.substr(start, pos_ - start);
            return t;
        }
        t.kind = Tok::Bad;
        t.text = text_.substr(pos_, 1);
        advance();
        return t;
    }

private:
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }

    void skip_trivia() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {  // line comment
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SourceSpan here() const { return {line_, col_, pos_}; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { bump(); }

    ParseResult run() {
        ParseResult out;
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Ident &&
                (cur_.text == "resources" || cur_.text == "group" || cur_.text == "action")) {
                parse_decl(out.doc);
                continue;
            }
            if (cur_.kind == Tok::LParen) {
                if (out.doc.root) {
                    error("E100", "unexpected second root node");
                    recover_node();
                    continue;
                }
                out.doc.root = parse_node();
                continue;
            }
            error("E100", "expected a declaration or a node expression");
            bump();
        }
        if (!out.doc.root) {
            error("E100", "document has no root node");
        } else {
            out.doc.finalize();
            auto extra = validate(out.doc);
            diags_.insert(diags_.end(), extra.begin(), extra.end());
        }
        out.diagnostics = std::move(diags_);
        return out;
    }

private:
    void bump() { cur_ = lexer_.next(); }

    void error(const char* code, std::string message, SourceSpan span) {
        diags_.push_back({code, std::move(message), span, false});
    }
    void error(const char* code, std::string message) { error(code, std::move(message), cur_.span); }

    bool expect(Tok kind, const char* what) {
        if (cur_.kind == kind) {
            bump();
            return true;
        }
        error("E100", std::string("expected ") + what);
        return false;
    }

    /// Skips to the next declaration keyword or top-level node start.
    void recover_decl() {
        while (cur_.kind != Tok::End && cur_.kind != Tok::LParen &&
               !(cur_.kind == Tok::Ident &&
                 (cur_.text == "resources" || cur_.text == "group" || cur_.text == "action")))
            bump();
    }

    /// Skips to the matching close paren of the current node expression.
    void recover_node() {
        int depth = 0;
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::LParen) ++depth;
            if (cur_.kind == Tok::RParen) {
                bump();
                if (--depth <= 0) return;
                continue;
            }
            bump();
        }
    }

    bool take_ident(std::string& out, const char* what) {
        if (cur_.kind != Tok::Ident) {
            error("E100", std::string("expected ") + what);
            return false;
        }
        out = std::string(cur_.text);
        bump();
        return true;
    }

    bool take_number(double& out) {
        if (cur_.kind == Tok::Bad && !cur_.text.empty()) {
            error("E101", "malformed number '" + std::string(cur_.text) + "'");
            bump();
            return false;
        }
        if (cur_.kind != Tok::Number) {
            error("E100", "expected a number");
            return false;
        }
        out = cur_.number;
        bump();
        return true;
    }

    void parse_decl(Document& doc) {
        SourceSpan at = cur_.span;
        std::string keyword(cur_.text);
        bump();
        if (keyword == "resources") {
            if (!expect(Tok::LBrace, "'{'")) return recover_decl();
            while (cur_.kind == Tok::Ident) {
                if (!doc.resources.insert(std::string(cur_.text)).second)
                    error("E113", "duplicate resource '" + std::string(cur_.text) + "'");
                bump();
            }
            expect(Tok::RBrace, "'}'");
            return;
        }
        if (keyword == "group") {
            std::string name;
            if (!take_ident(name, "group name")) return recover_decl();
            std::string kind;
            if (!take_ident(kind, "'absolute' or 'relative'")) return recover_decl();
            BarrierPolicy policy;
            if (kind == "absolute") {
                if (!expect(Tok::LBracket, "'['")) return recover_decl();
                std::vector<double> barriers;
                while (cur_.kind == Tok::Number) {
                    barriers.push_back(cur_.number);
                    bump();
                }
                if (!expect(Tok::RBracket, "']'")) return recover_decl();
                try {
                    policy = BarrierPolicy::absolute(std::move(barriers));
                } catch (const std::exception& e) {
                    error("E116", e.what(), at);
                    return;
                }
            } else if (kind == "relative") {
                double delta = 0.0;
                if (!take_number(delta)) return recover_decl();
                try {
                    policy = BarrierPolicy::relative(delta);
                } catch (const std::exception& e) {
                    error("E117", e.what(), at);
                    return;
                }
            } else {
                error("E100", "group policy must be 'absolute' or 'relative'", at);
                return recover_decl();
            }
            if (!doc.groups.emplace(name, std::move(policy)).second)
                error("E113", "duplicate group '" + name + "'", at);
            return;
        }
        // action NAME KIND NUM... [uses {A, B}]
        std::string name;
        if (!take_ident(name, "action name")) return recover_decl();
        std::string kind;
        if (!take_ident(kind, "action model kind")) return recover_decl();
        ActionDecl decl;
        std::vector<double> nums;
        while (cur_.kind == Tok::Number) {
            nums.push_back(cur_.number);
            bump();
        }
        auto arity = [&](std::size_t lo, std::size_t hi) {
            if (nums.size() >= lo && nums.size() <= hi) return true;
            error("E100", "wrong parameter count for '" + kind + "' action", at);
            return false;
        };
        if (kind == "stochastic") {
            decl.kind = ActionDecl::Kind::Stochastic;
            if (!arity(2, 3)) return recover_decl();
            decl.rate = nums[0];
            decl.noise = nums[1];
            if (nums.size() > 2) decl.start = nums[2];
        } else if (kind == "profile") {
            decl.kind = ActionDecl::Kind::Profile;
            if (!arity(1, 2)) return recover_decl();
            decl.rate = nums[0];
            if (nums.size() > 1) decl.start = nums[1];
        } else if (kind == "perpetual") {
            decl.kind = ActionDecl::Kind::Perpetual;
            if (!arity(0, 0)) return recover_decl();
        } else if (kind == "battery") {
            decl.kind = ActionDecl::Kind::Battery;
            if (!arity(1, 2)) return recover_decl();
            decl.rate = nums[0];
            if (nums.size() > 1) decl.start = nums[1];
        } else {
            error("E100", "unknown action model kind '" + kind + "'", at);
            return recover_decl();
        }
        if (cur_.kind == Tok::Ident && cur_.text == "uses") {
            bump();
            if (!expect(Tok::LBrace, "'{'")) return recover_decl();
            while (cur_.kind == Tok::Ident) {
                decl.uses.insert(std::string(cur_.text));
                bump();
            }
            expect(Tok::RBrace, "'}'");
        }
        if (!doc.actions.emplace(name, std::move(decl)).second)
            error("E113", "duplicate action '" + name + "'", at);
    }

    NodePtr parse_node() {
        SourceSpan at = cur_.span;
        if (!expect(Tok::LParen, "'('")) {
            recover_node();
            return nullptr;
        }
        std::string op;
        if (!take_ident(op, "a node operator")) {
            recover_node();
            return nullptr;
        }

        NodePtr node;
        try {
            if (op == "seq" || op == "seq*" || op == "fb" || op == "fb*") {
                auto children = parse_children();
                if (!expect(Tok::RParen, "')'")) recover_node();
                bool memory = op.back() == '*';
                node = (op[0] == 's') ? make_sequence(std::move(children), memory)
                                      : make_fallback(std::move(children), memory);
            } else if (op == "par") {
                double m = 0.0;
                if (!take_number(m)) {
                    recover_node();
                    return nullptr;
                }
                auto children = parse_children();
                if (!expect(Tok::RParen, "')'")) recover_node();
                if (m != static_cast<int>(m)) {
                    error("E115", "parallel threshold must be an integer", at);
                    return nullptr;
                }
                node = make_parallel(static_cast<int>(m), std::move(children));
            } else if (op == "psync") {
                std::string group;
                if (!take_ident(group, "a group name")) {
                    recover_node();
                    return nullptr;
                }
                auto children = parse_children();
                if (!expect(Tok::RParen, "')'")) recover_node();
                if (children.size() != 1) {
                    error("E114", "psync takes exactly one child", at);
                    return nullptr;
                }
                node = make_progress_sync(std::move(group), std::move(children.front()));
            } else if (op == "rsync") {
                std::string gkind;
                if (!take_ident(gkind, "'zero' or 'const'")) {
                    recover_node();
                    return nullptr;
                }
                double g = 0.0;
                if (gkind == "const") {
                    if (!take_number(g)) {
                        recover_node();
                        return nullptr;
                    }
                } else if (gkind != "zero") {
                    error("E100", "rsync increment must be 'zero' or 'const NUM'", at);
                    recover_node();
                    return nullptr;
                }
                auto children = parse_children();
                if (!expect(Tok::RParen, "')'")) recover_node();
                if (children.size() != 1) {
                    error("E114", "rsync takes exactly one child", at);
                    return nullptr;
                }
                node = make_resource_sync(g, std::move(children.front()));
            } else if (op == "act" || op == "cond") {
                std::string name;
                if (!take_ident(name, "a name")) {
                    recover_node();
                    return nullptr;
                }
                expect(Tok::RParen, "')'");
                node = op == "act" ? make_action(std::move(name)) : make_condition(std::move(name));
            } else {
                error("E100", "unknown node operator '" + op + "'", at);
                recover_node();
                return nullptr;
            }
        } catch (const std::exception& e) {
            // Arity and threshold violations surface here from the builders.
            const bool threshold = op == "par";
            error(threshold ? "E115" : "E114", e.what(), at);
            return nullptr;
        }
        if (node) node->span = at;
        return node;
    }

    std::vector<NodePtr> parse_children() {
        std::vector<NodePtr> children;
        while (cur_.kind == Tok::LParen) {
            auto c = parse_node();
            if (c) children.push_back(std::move(c));
        }
        return children;
    }

    Lexer lexer_;
    Token cur_;
    std::vector<Diagnostic> diags_;
};

void print_node(std::ostringstream& os, const Node& n) {
    os << '(' << to_string(n.kind);
    switch (n.kind) {
        case NodeKind::Parallel: os << ' ' << n.parallel_m; break;
        case NodeKind::ProgressSync: os << ' ' << n.group; break;
        case NodeKind::ResourceSync:
            if (n.priority_increment == 0.0) os << " zero";
            else os << " const " << format_number(n.priority_increment);
            break;
        case NodeKind::Action:
        case NodeKind::Condition: os << ' ' << n.name; break;
        default: break;
    }
    for (const auto& c : n.children) {
        os << ' ';
        print_node(os, *c);
    }
    os << ')';
}

/// Resource symbols a subtree could ever demand without a ResourceSync
/// standing between them and this root. Union over states, so a battery
/// counts its cables even in its charged state.
std::set<std::string> unguarded_worst_case(const Node& n, const Document& doc) {
    if (n.kind == NodeKind::ResourceSync) return {};
    if (n.kind == NodeKind::Action) {
        auto it = doc.actions.find(n.name);
        return it != doc.actions.end() ? it->second.uses : std::set<std::string>{};
    }
    std::set<std::string> all;
    for (const auto& c : n.children) {
        auto sub = unguarded_worst_case(*c, doc);
        all.insert(sub.begin(), sub.end());
    }
    return all;
}

void lint_conflicts(const Node& n, const Document& doc, std::vector<Diagnostic>& out) {
    if (n.kind == NodeKind::Parallel) {
        std::vector<std::set<std::string>> worst;
        worst.reserve(n.children.size());
        for (const auto& c : n.children) worst.push_back(unguarded_worst_case(*c, doc));
        for (std::size_t i = 0; i < worst.size(); ++i) {
            for (std::size_t j = i + 1; j < worst.size(); ++j) {
                std::vector<std::string> shared;
                std::set_intersection(worst[i].begin(), worst[i].end(), worst[j].begin(),
                                      worst[j].end(), std::back_inserter(shared));
                if (shared.empty()) continue;
                std::ostringstream msg;
                msg << "children " << i + 1 << " and " << j + 1
                    << " of this parallel may both use {";
                for (std::size_t k = 0; k < shared.size(); ++k)
                    msg << (k ? ", " : "") << shared[k];
                msg << "} concurrently without a resource guard";
                out.push_back({"W200", msg.str(), n.span, true});
            }
        }
    }
    for (const auto& c : n.children) lint_conflicts(*c, doc, out);
}

void check_refs(const Node& n, const Document& doc, std::vector<Diagnostic>& out) {
    if (n.kind == NodeKind::ProgressSync && !doc.groups.count(n.group))
        out.push_back({"E110", "unknown sync group '" + n.group + "'", n.span, false});
    if (n.kind == NodeKind::Action && !doc.actions.count(n.name))
        out.push_back({"E111", "unknown action '" + n.name + "'", n.span, false});
    for (const auto& c : n.children) check_refs(*c, doc, out);
}

}  // namespace

ParseResult parse(std::string_view text) { return Parser(text).run(); }

std::vector<Diagnostic> validate(const Document& doc) {
    std::vector<Diagnostic> out;
    for (const auto& [name, decl] : doc.actions) {
        for (const auto& q : decl.uses) {
            if (!doc.resources.count(q))
                out.push_back(
                    {"E112", "action '" + name + "' uses undeclared resource '" + q + "'",
                     SourceSpan{}, false});
        }
    }
    if (doc.root) {
        check_refs(*doc.root, doc, out);
        lint_conflicts(*doc.root, doc, out);
    }
    return out;
}

std::string print(const Document& doc) {
    std::ostringstream os;
    if (!doc.resources.empty()) {
        os << "resources {";
        bool first = true;
        for (const auto& r : doc.resources) {
            os << (first ? "" : ", ") << r;
            first = false;
        }
        os << "}\n";
    }
    for (const auto& [name, policy] : doc.groups) {
        os << "group " << name << ' ';
        if (policy.kind == BarrierPolicy::Kind::Absolute) {
            os << "absolute [";
            for (std::size_t i = 0; i < policy.barriers.size(); ++i)
                os << (i ? " " : "") << format_number(policy.barriers[i]);
            os << "]";
        } else {
            os << "relative " << format_number(policy.delta);
        }
        os << '\n';
    }
    for (const auto& [name, decl] : doc.actions) {
        os << "action " << name << ' ';
        switch (decl.kind) {
            case ActionDecl::Kind::Stochastic:
                os << "stochastic " << format_number(decl.rate) << ' '
                   << format_number(decl.noise);
                if (decl.start != 0.0) os << ' ' << format_number(decl.start);
                break;
            case ActionDecl::Kind::Profile:
                os << "profile " << format_number(decl.rate);
                if (decl.start != 0.0) os << ' ' << format_number(decl.start);
                break;
            case ActionDecl::Kind::Perpetual: os << "perpetual"; break;
            case ActionDecl::Kind::Battery:
                os << "battery " << format_number(decl.rate);
                if (decl.start != 0.0) os << ' ' << format_number(decl.start);
                break;
        }
        if (!decl.uses.empty()) {
            os << " uses {";
            bool first = true;
            for (const auto& r : decl.uses) {
                os << (first ? "" : ", ") << r;
                first = false;
            }
            os << '}';
        }
        os << '\n';
    }
    if (doc.root) {
        print_node(os, *doc.root);
        os << '\n';
    }
    return os.str();
}

}  // namespace cbt::dsl
