#pragma once

#include <string>

#include <json.hpp>

#include "rmx/code_tree.hpp"
#include "rmx/sim.hpp"

namespace rmx::config {

using Json = nlohmann::ordered_json;

// Code spec schema:
//   {"type":"rm",   "m":6, "r":2, "termination":"partial"|"full",
//    "freezing":[..per-leaf prefix lengths..]}
//   {"type":"quad", "m":5, "r":2, "ordering":"standard"|"chained",
//    "termination":..., "freezing":[..]}
//   {"type":"custom", "tree": <node>, "freezing":[..]}
// where <node> is one of
//   {"kind":"branch",  "v":<node>, "u":<node>}
//   {"kind":"chained", "v":<node>, "w2":<node>, "w1":<node>, "u":<node>}
//   {"kind":"repetition"|"biorthogonal"|"spc"|"full", "m":j}
//   {"kind":"rm", "m":, "r":, "termination":...}   (subtree shorthand)
struct ParsedCode {
    CodeTree tree;
    std::string id;
};
ParsedCode parse_code(const Json& spec);

// Simulation spec: {"code":<code spec>, "snr_db":[...], "snr_convention":
// "ebno"|"esno"|"sigma", "list":{"L":int|[ints], "per_leaf":[..],
// "variable_threshold":bool, "leaf_factor":int, "full_leaf_factor":int},
// "trials":N, "target_block_errors":M, "seed":S, "workers":W,
// "all_zero":bool}
SimConfig parse_sim(const Json& spec);

// The same spec with every default and the seed made explicit, in canonical
// key order; reruns from the resolved form reproduce output byte-for-byte.
Json resolved_sim(const SimConfig& cfg, const Json& code_spec);

Json load_file(const std::string& path);

}  // namespace rmx::config
