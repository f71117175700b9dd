#include "sailkit/harness/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "sailkit/util/format.hpp"

namespace sailkit {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::size_t> parse_resolution(const std::string& v,
                                          const std::string& origin,
                                          std::size_t line) {
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, 'x')) {
        try {
            out.push_back(std::stoul(trim(tok)));
        } catch (const std::exception&) {
            fail(origin, line, "bad resolution value '" + v + "'");
        }
    }
    if (out.empty()) fail(origin, line, "empty resolution");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& v,
                                         const std::string& origin,
                                         std::size_t line) {
    std::vector<std::size_t> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stoul(trim(tok)));
        } catch (const std::exception&) {
            fail(origin, line, "bad size list '" + v + "'");
        }
    }
    if (out.empty()) fail(origin, line, "empty size list");
    return out;
}

bool parse_bool(const std::string& v, const std::string& origin, std::size_t line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(origin, line, "bad boolean '" + v + "'");
}

} // namespace

ExperimentKind RunConfig::experiment_from_name(const std::string& name) {
    if (name == "map-elites") return ExperimentKind::MapElites;
    if (name == "sail") return ExperimentKind::Sail;
    if (name == "fig5") return ExperimentKind::Fig5;
    if (name == "fig6") return ExperimentKind::Fig6;
    if (name == "bakeoff") return ExperimentKind::Bakeoff;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::string RunConfig::experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::MapElites: return "map-elites";
    case ExperimentKind::Sail: return "sail";
    case ExperimentKind::Fig5: return "fig5";
    case ExperimentKind::Fig6: return "fig6";
    case ExperimentKind::Bakeoff: return "bakeoff";
    }
    return "?";
}

RunConfig RunConfig::parse(std::istream& in, const std::string& origin) {
    RunConfig cfg;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(origin, lineno, "unterminated section header");
            section = t.substr(1, t.size() - 2);
            if (section != "run" && section != "illumination" && section != "sail" &&
                section != "fig5" && section != "fig6" && section != "bakeoff") {
                fail(origin, lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty()) fail(origin, lineno, "key outside any section");

        try {
            if (section == "run") {
                if (key == "experiment") cfg.experiment = experiment_from_name(value);
                else if (key == "problem") cfg.problem = value;
                else if (key == "seed") cfg.seed = std::stoull(value);
                else fail(origin, lineno, "unknown key '" + key + "' in [run]");
            } else if (section == "illumination") {
                auto& il = cfg.illumination;
                if (key == "init_count") il.init_count = std::stoul(value);
                else if (key == "total_evaluations") il.total_evaluations = std::stoul(value);
                else if (key == "sigma_frac") il.sigma_frac = std::stod(value);
                else if (key == "resolution") il.resolution = parse_resolution(value, origin, lineno);
                else fail(origin, lineno, "unknown key '" + key + "' in [illumination]");
            } else if (section == "sail") {
                auto& s = cfg.sail;
                if (key == "init_count") s.init_count = std::stoul(value);
                else if (key == "rounds") s.rounds = std::stoul(value);
                else if (key == "batch_size") s.batch_size = std::stoul(value);
                else if (key == "kappa") s.kappa = std::stod(value);
                else if (key == "surrogate") {
                    if (value == "gp") s.surrogate = SurrogateKind::Gp;
                    else if (value == "bann") s.surrogate = SurrogateKind::Bann;
                    else if (value == "hierarchical") s.surrogate = SurrogateKind::Hierarchical;
                    else fail(origin, lineno, "unknown surrogate '" + value + "'");
                }
                else if (key == "acq_evaluations") s.acq_evaluations = std::stoul(value);
                else if (key == "pred_evaluations") s.pred_evaluations = std::stoul(value);
                else if (key == "inner_init_count") s.inner_init_count = std::stoul(value);
                else if (key == "sigma_frac") s.sigma_frac = std::stod(value);
                else if (key == "resolution") s.resolution = parse_resolution(value, origin, lineno);
                else if (key == "gp_fit_hyperparams") s.gp_fit_hyperparams = parse_bool(value, origin, lineno);
                else if (key == "gp_hyper_subsample") s.gp_hyper_subsample = std::stoul(value);
                else if (key == "bann_members") s.bann.members = std::stoul(value);
                else if (key == "bann_hidden") s.bann.hidden = std::stoul(value);
                else if (key == "hierarchy_depth") s.hierarchy.depth = std::stoul(value);
                else if (key == "hierarchy_branching") s.hierarchy.branching = std::stoul(value);
                else if (key == "hierarchy_min_leaf") s.hierarchy.min_leaf_samples = std::stoul(value);
                else if (key == "hierarchy_gamma") s.hierarchy.gamma = std::stod(value);
                else if (key == "hierarchy_confidence") {
                    if (value == "flat-variance") s.hierarchy.confidence = ConfidenceStrategy::FlatVariance;
                    else if (value == "depth-weighted") s.hierarchy.confidence = ConfidenceStrategy::DepthWeighted;
                    else fail(origin, lineno, "unknown confidence strategy '" + value + "'");
                }
                else if (key == "hierarchy_mode") {
                    if (value == "residual") s.hierarchy.mode = HierarchyBuildMode::Residual;
                    else if (value == "independent-subsets") s.hierarchy.mode = HierarchyBuildMode::IndependentSubsets;
                    else fail(origin, lineno, "unknown hierarchy mode '" + value + "'");
                }
                else if (key == "hierarchy_base") {
                    if (value == "gp") s.hierarchy.base.kind = BaseModelKind::Gp;
                    else if (value == "bann") s.hierarchy.base.kind = BaseModelKind::Bann;
                    else fail(origin, lineno, "unknown hierarchy base model '" + value + "'");
                }
                else fail(origin, lineno, "unknown key '" + key + "' in [sail]");
            } else if (section == "fig5") {
                if (key == "replicates") cfg.fig5_replicates = std::stoul(value);
                else if (key == "starts") cfg.fig5_starts = std::stoul(value);
                else if (key == "training_size") cfg.fig5_training_size = std::stoul(value);
                else if (key == "hill_step") cfg.fig5_hill_step = std::stod(value);
                else if (key == "hill_iters") cfg.fig5_hill_iters = std::stoul(value);
                else fail(origin, lineno, "unknown key '" + key + "' in [fig5]");
            } else if (section == "fig6") {
                if (key == "segments") cfg.fig6_segments = std::stoul(value);
                else if (key == "pca_cutoff") cfg.fig6_pca_cutoff = std::stod(value);
                else if (key == "sample_evaluations") cfg.fig6_sample_evaluations = std::stoul(value);
                else if (key == "min_segment") cfg.fig6_min_segment = std::stoul(value);
                else if (key == "residual_mode") cfg.fig6_residual_mode = parse_bool(value, origin, lineno);
                else fail(origin, lineno, "unknown key '" + key + "' in [fig6]");
            } else if (section == "bakeoff") {
                if (key == "sizes") cfg.bakeoff_sizes = parse_size_list(value, origin, lineno);
                else if (key == "test_points") cfg.bakeoff_test_points = std::stoul(value);
                else fail(origin, lineno, "unknown key '" + key + "' in [bakeoff]");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            fail(origin, lineno, "bad value for '" + key + "': " + e.what());
        }
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in, path);
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    os << "[run]\n";
    os << "experiment = " << experiment_name(experiment) << "\n";
    os << "problem = " << problem << "\n";
    os << "seed = " << seed << "\n";
    os << "[illumination]\n";
    os << "init_count = " << illumination.init_count << "\n";
    os << "total_evaluations = " << illumination.total_evaluations << "\n";
    os << "sigma_frac = " << fmt_double(illumination.sigma_frac) << "\n";
    os << "resolution = ";
    for (std::size_t i = 0; i < illumination.resolution.size(); ++i) {
        os << (i ? "x" : "") << illumination.resolution[i];
    }
    os << "\n";
    os << "[sail]\n";
    os << "init_count = " << sail.init_count << "\n";
    os << "rounds = " << sail.rounds << "\n";
    os << "batch_size = " << sail.batch_size << "\n";
    os << "kappa = " << fmt_double(sail.kappa) << "\n";
    os << "surrogate = "
       << (sail.surrogate == SurrogateKind::Gp
               ? "gp"
               : sail.surrogate == SurrogateKind::Bann ? "bann" : "hierarchical")
       << "\n";
    os << "acq_evaluations = " << sail.acq_evaluations << "\n";
    os << "pred_evaluations = " << sail.pred_evaluations << "\n";
    os << "inner_init_count = " << sail.inner_init_count << "\n";
    os << "sigma_frac = " << fmt_double(sail.sigma_frac) << "\n";
    os << "resolution = ";
    for (std::size_t i = 0; i < sail.resolution.size(); ++i) {
        os << (i ? "x" : "") << sail.resolution[i];
    }
    os << "\n";
    os << "gp_fit_hyperparams = " << (sail.gp_fit_hyperparams ? "true" : "false") << "\n";
    os << "gp_hyper_subsample = " << sail.gp_hyper_subsample << "\n";
    os << "bann_members = " << sail.bann.members << "\n";
    os << "bann_hidden = " << sail.bann.hidden << "\n";
    os << "hierarchy_depth = " << sail.hierarchy.depth << "\n";
    os << "hierarchy_branching = " << sail.hierarchy.branching << "\n";
    os << "hierarchy_min_leaf = " << sail.hierarchy.min_leaf_samples << "\n";
    os << "hierarchy_gamma = " << fmt_double(sail.hierarchy.gamma) << "\n";
    os << "hierarchy_confidence = "
       << (sail.hierarchy.confidence == ConfidenceStrategy::FlatVariance
               ? "flat-variance"
               : "depth-weighted")
       << "\n";
    os << "hierarchy_mode = "
       << (sail.hierarchy.mode == HierarchyBuildMode::Residual ? "residual"
                                                               : "independent-subsets")
       << "\n";
    os << "hierarchy_base = "
       << (sail.hierarchy.base.kind == BaseModelKind::Gp ? "gp" : "bann") << "\n";
    os << "[fig5]\n";
    os << "replicates = " << fig5_replicates << "\n";
    os << "starts = " << fig5_starts << "\n";
    os << "training_size = " << fig5_training_size << "\n";
    os << "hill_step = " << fmt_double(fig5_hill_step) << "\n";
    os << "hill_iters = " << fig5_hill_iters << "\n";
    os << "[fig6]\n";
    os << "segments = " << fig6_segments << "\n";
    os << "pca_cutoff = " << fmt_double(fig6_pca_cutoff) << "\n";
    os << "sample_evaluations = " << fig6_sample_evaluations << "\n";
    os << "min_segment = " << fig6_min_segment << "\n";
    os << "residual_mode = " << (fig6_residual_mode ? "true" : "false") << "\n";
    os << "[bakeoff]\n";
    os << "sizes = ";
    for (std::size_t i = 0; i < bakeoff_sizes.size(); ++i) {
        os << (i ? "," : "") << bakeoff_sizes[i];
    }
    os << "\n";
    os << "test_points = " << bakeoff_test_points << "\n";
    return os.str();
}

} // namespace sailkit
