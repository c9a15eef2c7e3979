#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace cbt::dsl {

/// One parse or validation finding. Errors make the document unusable;
/// warnings (the static resource-conflict lint) do not.
struct Diagnostic {
    std::string code;     ///< stable identifier, e.g. "E110"
    std::string message;
    SourceSpan span;
    bool warning = false;

    /// Renders as `file:line:col: code: message`.
    std::string format(std::string_view file) const;
};

struct ParseResult {
    Document doc;
    std::vector<Diagnostic> diagnostics;

    bool ok() const {
        for (const auto& d : diagnostics)
            if (!d.warning) return false;
        return true;
    }
};

// Diagnostic codes.
//   E100 syntax error                E101 malformed number
//   E110 unknown sync group          E111 unknown action
//   E112 unknown resource            E113 duplicate declaration
//   E114 arity violation             E115 parallel threshold out of range
//   E116 bad barrier list            E117 bad relative threshold
//   W200 unguarded resource conflict under a parallel

/// Parses a tree file. Never throws on bad input; syntax errors are
/// recovered at declaration / node granularity so one pass reports as much
/// as possible. On success the document is finalized and validated (the
/// result carries any lint warnings).
ParseResult parse(std::string_view text);

/// Referential checks plus the static conflict lint. The parser runs this
/// itself; it is exposed for programmatically built documents.
std::vector<Diagnostic> validate(const Document& doc);

/// Canonical text form; parse(print(doc)) is structurally equal to doc.
std::string print(const Document& doc);

/// Shortest round-trip decimal form of a value (helper shared with the
/// CSV writers so numeric output is uniform).
std::string format_number(double v);

}  // namespace cbt::dsl
