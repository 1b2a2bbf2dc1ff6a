#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifstype/constructions.hpp"
#include "ifstype/ifs.hpp"
#include "ifstype/oracle.hpp"
#include "ifstype/spectra.hpp"

namespace ifstype {

// Settings shared by the CLI subcommands, parsed from a JSON document.
// The document names the system either directly ("system": ratio, digits,
// probs as "a/b" strings) or through a generator ("construction": kind, R,
// block_probs, optional shared_prob); when both appear they must agree.
// Everything else has a default: L (outer walk length), Lc (cycle length
// cap), cap (characteristic vector cap), oracle_depths / oracle_points /
// oracle_qs, qmin / qmax / qstep / qrefine, out.
struct RunConfig {
    std::optional<WeightedIFS> system;
    std::optional<Construction> construction;

    std::uint32_t outer_len = 5;
    std::uint32_t cycle_len = 3;
    std::size_t closure_cap = 4096;
    DepthRange oracle_depths;       // unset: per-system defaults
    std::vector<Rat> oracle_points; // empty: 0, 1/2, 1
    std::vector<double> oracle_qs;  // empty: 0, 1
    GridSpec grid;
    std::string out = ".";

    const WeightedIFS& ifs() const;
};

// Throws Error("ConfigError") on malformed JSON, unknown keys, missing
// system data, or a system/construction mismatch; direct systems are also
// validated, so structural problems surface with their own codes.
RunConfig parse_config(const std::string& text);

// Reads and parses; unreadable paths raise Error("IoError").
RunConfig load_config(const std::string& path);

// Serializes back to the accepted JSON form, construction echoed next to
// its expanded system.  parse_config(render_config(c)) reproduces every
// rational exactly.
std::string render_config(const RunConfig& cfg);

} // namespace ifstype
