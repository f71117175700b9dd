#include "sailkit/optimize/map_elites.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "sailkit/util/format.hpp"

namespace sailkit {

void IlluminationConfig::validate() const {
    if (init_count < 1) throw std::invalid_argument("IlluminationConfig: init_count must be >= 1");
    if (init_count > total_evaluations) {
        throw std::invalid_argument("IlluminationConfig: init_count must be <= total_evaluations");
    }
    if (!(sigma_frac > 0.0) || sigma_frac > 1.0) {
        throw std::invalid_argument("IlluminationConfig: sigma_frac must be in (0, 1]");
    }
    if (resolution.empty()) throw std::invalid_argument("IlluminationConfig: empty resolution");
}

namespace {

FeatureCoordinates checked_features(
    const std::function<FeatureCoordinates(const ParameterVector&)>& features,
    const ParameterVector& x, std::size_t expected_dim) {
    FeatureCoordinates f = features(x);
    if (f.size() != expected_dim) {
        std::ostringstream oss;
        oss << "map_elites: feature function returned " << f.size()
            << " coordinates, archive expects " << expected_dim << " for x = (";
        for (std::size_t i = 0; i < x.size(); ++i) oss << (i ? ", " : "") << x[i];
        oss << ")";
        throw std::domain_error(oss.str());
    }
    for (double v : f) {
        if (!(v >= 0.0 && v <= 1.0)) {
            std::ostringstream oss;
            oss << "map_elites: feature function returned " << v
                << " outside [0,1] for x = (";
            for (std::size_t i = 0; i < x.size(); ++i) oss << (i ? ", " : "") << x[i];
            oss << ")";
            throw std::domain_error(oss.str());
        }
    }
    return f;
}

} // namespace

IlluminationResult map_elites(
    const DomainSpec& spec,
    const std::function<double(const ParameterVector&)>& fitness,
    const std::function<FeatureCoordinates(const ParameterVector&)>& features,
    const IlluminationConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    IlluminationResult res{Archive(cfg.resolution), {}, 0};
    const std::size_t cadence = std::max<std::size_t>(1, cfg.total_evaluations / 200);

    auto record = [&] {
        const ArchiveMetrics m = res.archive.metrics();
        res.history.push_back({res.evaluations, m.coverage, m.qd_score, m.best});
    };

    auto admit = [&](ParameterVector x) {
        FeatureCoordinates f = checked_features(features, x, cfg.resolution.size());
        const double fit = fitness(x);
        ++res.evaluations;
        res.archive.offer({std::move(x), std::move(f), fit});
        if (res.evaluations % cadence == 0 || res.evaluations == cfg.total_evaluations) {
            record();
        }
    };

    Rng init_rng = rng.split(0);
    for (auto& x : initial_set(spec, cfg.init_count, init_rng)) admit(std::move(x));

    Rng breed_rng = rng.split(1);
    while (res.evaluations < cfg.total_evaluations) {
        const Elite& parent = res.archive.random_elite(breed_rng);
        admit(mutate(parent.x, cfg.sigma_frac, spec, breed_rng));
    }
    if (res.history.empty() || res.history.back().evals != res.evaluations) record();
    return res;
}

IlluminationResult map_elites(const Problem& problem, const IlluminationConfig& cfg) {
    return map_elites(problem.spec, problem.evaluate, problem.features, cfg);
}

void export_history_csv(const std::vector<HistoryRow>& history, std::ostream& os) {
    os << "evals,coverage,qd_score,best\n";
    for (const auto& row : history) {
        os << row.evals << "," << fmt_double(row.coverage) << ","
           << fmt_double(row.qd_score) << "," << fmt_double(row.best) << "\n";
    }
}

HillClimbResult hill_climb(const std::function<double(const ParameterVector&)>& surface,
                           const ParameterVector& start, const DomainSpec& spec,
                           double step_frac, std::size_t max_iters) {
    if (!(step_frac > 0.0)) throw std::invalid_argument("hill_climb: step must be > 0");
    HillClimbResult res{start, surface(start), 0};
    double step = step_frac;
    while (res.iterations < max_iters && step >= 1e-6) {
        ParameterVector best_probe;
        double best_val = res.f_best;
        for (std::size_t d = 0; d < spec.dim; ++d) {
            for (double dir : {+1.0, -1.0}) {
                ParameterVector probe = res.x_best;
                probe[d] = std::clamp(probe[d] + dir * step * spec.range(d),
                                      spec.lower[d], spec.upper[d]);
                if (probe[d] == res.x_best[d]) continue;
                const double val = surface(probe);
                if (val > best_val) {
                    best_val = val;
                    best_probe = std::move(probe);
                }
            }
        }
        ++res.iterations;
        if (best_probe.empty()) {
            step *= 0.5;
        } else {
            res.x_best = std::move(best_probe);
            res.f_best = best_val;
        }
    }
    return res;
}

} // namespace sailkit
