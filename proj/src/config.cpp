#include "rmx/config.hpp"

#include <fstream>
#include <memory>

namespace rmx::config {

namespace {

Termination parse_termination(const Json& j, const char* key) {
    std::string t = j.value(key, "partial");
    if (t == "partial") return Termination::Partial;
    if (t == "full") return Termination::Full;
    throw std::invalid_argument("config: termination must be \"partial\" or \"full\"");
}

CodeTree parse_node(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("config: custom tree node needs a \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "branch") return make_branch(parse_node(j.at("v")), parse_node(j.at("u")));
    if (kind == "chained")
        return make_chained(parse_node(j.at("v")), parse_node(j.at("w2")),
                            parse_node(j.at("w1")), parse_node(j.at("u")));
    if (kind == "rm")
        return build_rm_tree(j.at("m").get<int>(), j.at("r").get<int>(),
                             parse_termination(j, "termination"));
    int m = j.at("m").get<int>();
    if (kind == "repetition") return make_leaf(NodeKind::LeafRepetition, m);
    if (kind == "biorthogonal") return make_leaf(NodeKind::LeafBiorthogonal, m);
    if (kind == "spc") return make_leaf(NodeKind::LeafSpc, m);
    if (kind == "full") return make_leaf(NodeKind::LeafFull, m);
    throw std::invalid_argument("config: unknown tree node kind \"" + kind + "\"");
}

}  // namespace

ParsedCode parse_code(const Json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("config: code spec must be an object");
    std::string type = spec.value("type", "rm");
    CodeTree tree = [&] {
        if (type == "rm")
            return build_rm_tree(spec.at("m").get<int>(), spec.at("r").get<int>(),
                                 parse_termination(spec, "termination"));
        if (type == "quad") {
            std::string ord = spec.value("ordering", "standard");
            if (ord != "standard" && ord != "chained")
                throw std::invalid_argument(
                    "config: quad ordering must be \"standard\" or \"chained\"");
            return build_quad_tree(spec.at("m").get<int>(), spec.at("r").get<int>(),
                                   ord == "standard" ? QuadOrdering::Standard
                                                     : QuadOrdering::Chained,
                                   parse_termination(spec, "termination"));
        }
        if (type == "custom") return parse_node(spec.at("tree"));
        throw std::invalid_argument("config: code type must be rm, quad or custom");
    }();
    if (spec.contains("freezing"))
        tree = apply_freezing(tree, spec.at("freezing").get<std::vector<int>>());

    std::string id;
    if (type == "rm" || type == "quad") {
        id = type + std::to_string(spec.at("m").get<int>()) + "." +
             std::to_string(spec.at("r").get<int>());
        id += parse_termination(spec, "termination") == Termination::Partial ? "p" : "f";
        if (type == "quad") id += spec.value("ordering", "standard") == "chained" ? "c" : "s";
    } else {
        id = "custom" + std::to_string(tree.label().m) + "." + std::to_string(tree.label().r);
    }
    if (tree.root().freeze_total > 0) id += "-k" + std::to_string(tree.dimension_effective());
    return {std::move(tree), std::move(id)};
}

SimConfig parse_sim(const Json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("config: sim spec must be an object");
    SimConfig cfg;
    ParsedCode code = parse_code(spec.at("code"));
    cfg.tree = std::make_shared<CodeTree>(std::move(code.tree));
    cfg.code_id = code.id;

    if (spec.contains("snr_db")) cfg.grid = spec.at("snr_db").get<std::vector<double>>();
    std::string conv = spec.value("snr_convention", "ebno");
    if (conv == "ebno") cfg.convention = SnrConvention::EbN0;
    else if (conv == "esno") cfg.convention = SnrConvention::EsN0;
    else if (conv == "sigma") cfg.convention = SnrConvention::Sigma;
    else throw std::invalid_argument("config: snr_convention must be ebno, esno or sigma");

    if (spec.contains("list")) {
        const Json& l = spec.at("list");
        if (l.contains("L")) {
            if (l.at("L").is_array()) cfg.list_sizes = l.at("L").get<std::vector<int>>();
            else cfg.list_sizes = {l.at("L").get<int>()};
        }
        if (l.contains("per_leaf")) cfg.per_leaf_list = l.at("per_leaf").get<std::vector<int>>();
        cfg.variable_threshold = l.value("variable_threshold", false);
        cfg.leaf_factor = l.value("leaf_factor", 2);
        cfg.full_leaf_factor = l.value("full_leaf_factor", 2);
    }
    cfg.max_trials = spec.value("trials", std::uint64_t{10000});
    cfg.target_block_errors = spec.value("target_block_errors", std::uint64_t{100});
    cfg.seed = spec.value("seed", std::uint64_t{1});
    cfg.workers = spec.value("workers", 1);
    cfg.all_zero = spec.value("all_zero", false);
    cfg.validate();
    return cfg;
}

Json resolved_sim(const SimConfig& cfg, const Json& code_spec) {
    Json out;
    out["code"] = code_spec;
    out["snr_db"] = cfg.grid;
    switch (cfg.convention) {
        case SnrConvention::EbN0: out["snr_convention"] = "ebno"; break;
        case SnrConvention::EsN0: out["snr_convention"] = "esno"; break;
        case SnrConvention::Sigma: out["snr_convention"] = "sigma"; break;
    }
    Json list;
    list["L"] = cfg.list_sizes;
    if (!cfg.per_leaf_list.empty()) list["per_leaf"] = cfg.per_leaf_list;
    list["variable_threshold"] = cfg.variable_threshold;
    list["leaf_factor"] = cfg.leaf_factor;
    list["full_leaf_factor"] = cfg.full_leaf_factor;
    out["list"] = list;
    out["trials"] = cfg.max_trials;
    out["target_block_errors"] = cfg.target_block_errors;
    out["seed"] = cfg.seed;
    out["workers"] = cfg.workers;
    out["all_zero"] = cfg.all_zero;
    return out;
}

Json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    Json j;
    in >> j;
    return j;
}

}  // namespace rmx::config
