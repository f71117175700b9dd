#include "sailkit/optimize/sail.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sailkit/util/format.hpp"

namespace sailkit {

double ucb(double mean, double variance, double kappa) {
    if (variance < 0.0) throw std::invalid_argument("ucb: negative variance");
    return mean + kappa * std::sqrt(variance);
}

void SailConfig::validate() const {
    if (init_count < 1) throw std::invalid_argument("SailConfig: init_count must be >= 1");
    if (rounds < 1) throw std::invalid_argument("SailConfig: rounds must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("SailConfig: batch_size must be >= 1");
    if (kappa < 0.0) throw std::invalid_argument("SailConfig: kappa must be >= 0");
    if (resolution.empty()) throw std::invalid_argument("SailConfig: empty resolution");
}

std::function<Prediction(const ParameterVector&)> train_sail_surrogate(
    const std::vector<Sample>& samples, const SailConfig& cfg,
    const Problem& problem, Rng& rng) {
    std::vector<ParameterVector> X;
    std::vector<double> y;
    X.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& s : samples) {
        X.push_back(s.x);
        y.push_back(s.fitness);
    }

    switch (cfg.surrogate) {
    case SurrogateKind::Gp: {
        GpHyperparams hyper;
        if (cfg.gp_fit_hyperparams && X.size() >= 4) {
            Rng fit_rng = rng.split(1);
            if (X.size() > cfg.gp_hyper_subsample) {
                // Likelihood search on a subsample; the full set still
                // backs the final factorization.
                std::vector<std::size_t> idx(X.size());
                std::iota(idx.begin(), idx.end(), std::size_t{0});
                std::shuffle(idx.begin(), idx.end(), fit_rng.engine());
                idx.resize(cfg.gp_hyper_subsample);
                std::vector<ParameterVector> Xs;
                std::vector<double> ys;
                for (std::size_t i : idx) {
                    Xs.push_back(X[i]);
                    ys.push_back(y[i]);
                }
                hyper = fit_gp_hyperparams(Xs, ys, cfg.gp_fit, fit_rng);
            } else {
                hyper = fit_gp_hyperparams(X, y, cfg.gp_fit, fit_rng);
            }
        } else {
            hyper = GpHyperparams::defaults(X[0].size());
            hyper.noise_variance = 1e-4;
        }
        auto model = std::make_shared<GpModel>(GpModel::train(X, y, hyper));
        return [model](const ParameterVector& x) { return model->predict(x); };
    }
    case SurrogateKind::Bann: {
        Rng bann_rng = rng.split(2);
        auto model = std::make_shared<BannEnsemble>(
            BannEnsemble::train(X, y, cfg.bann, bann_rng, &problem.spec));
        return [model](const ParameterVector& x) { return model->predict(x); };
    }
    case SurrogateKind::Hierarchical: {
        Rng h_rng = rng.split(3);
        auto model = std::make_shared<HierarchicalSurrogate>(
            HierarchicalSurrogate::build(samples, cfg.hierarchy, h_rng));
        auto features = problem.features;
        return [model, features](const ParameterVector& x) {
            return model->predict(x, features(x));
        };
    }
    }
    throw std::invalid_argument("train_sail_surrogate: unknown surrogate kind");
}

SailResult sail(const Problem& problem, const SailConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    std::vector<Sample> samples;
    Rng init_rng = rng.split(0);
    for (auto& x : initial_set(problem.spec, cfg.init_count, init_rng)) {
        Sample s;
        s.features = problem.features(x);
        s.fitness = problem.evaluate(x);
        s.x = std::move(x);
        samples.push_back(std::move(s));
    }

    std::vector<SailRound> round_rows;
    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        Rng round_rng = rng.split(round);
        SailRound row;
        row.round = round;

        const auto t0 = std::chrono::steady_clock::now();
        std::function<Prediction(const ParameterVector&)> surrogate;
        try {
            surrogate = train_sail_surrogate(samples, cfg, problem, round_rng);
        } catch (const std::exception& e) {
            throw std::runtime_error("sail: surrogate training failed in round " +
                                     std::to_string(round) + ": " + e.what());
        }
        row.surrogate_train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        IlluminationConfig acq_cfg;
        acq_cfg.init_count = std::min(cfg.inner_init_count, cfg.acq_evaluations);
        acq_cfg.total_evaluations = cfg.acq_evaluations;
        acq_cfg.sigma_frac = cfg.sigma_frac;
        acq_cfg.resolution = cfg.resolution;
        acq_cfg.seed = round_rng.split(100).seed();
        const double kappa = cfg.kappa;
        auto acq_fitness = [&surrogate, kappa](const ParameterVector& x) {
            const Prediction p = surrogate(x);
            return ucb(p.mean, p.variance, kappa);
        };
        IlluminationResult acq =
            map_elites(problem.spec, acq_fitness, problem.features, acq_cfg);

        row.acq_coverage = acq.archive.metrics().coverage;
        double qd_surrogate = 0.0;
        for (std::size_t flat : acq.archive.occupied_bins()) {
            qd_surrogate += surrogate(acq.archive.bin(flat)->x).mean;
        }
        row.pred_qd_score_surrogate = qd_surrogate;

        // New true evaluations: uniform over occupied acquisition bins,
        // without replacement.
        std::vector<std::size_t> occupied = acq.archive.occupied_bins();
        Rng select_rng = round_rng.split(200);
        std::shuffle(occupied.begin(), occupied.end(), select_rng.engine());
        const std::size_t take = std::min<std::size_t>(cfg.batch_size, occupied.size());
        for (std::size_t i = 0; i < take; ++i) {
            const Elite& elite = *acq.archive.bin(occupied[i]);
            Sample s;
            s.x = elite.x;
            s.features = elite.features;
            s.fitness = problem.evaluate(elite.x);
            samples.push_back(std::move(s));
        }
        // Top up from fresh random draws if the acquisition map had too
        // few occupied bins, keeping the true-evaluation budget exact.
        for (std::size_t i = take; i < cfg.batch_size; ++i) {
            Sample s;
            s.x = random_vector(problem.spec, select_rng);
            s.features = problem.features(s.x);
            s.fitness = problem.evaluate(s.x);
            samples.push_back(std::move(s));
        }

        row.true_evals = samples.size();
        round_rows.push_back(row);
    }

    // Final surrogate and the mean-surface prediction archive.
    Rng final_rng = rng.split(cfg.rounds + 1);
    auto surrogate = train_sail_surrogate(samples, cfg, problem, final_rng);
    IlluminationConfig pred_cfg;
    pred_cfg.init_count = std::min(cfg.inner_init_count, cfg.pred_evaluations);
    pred_cfg.total_evaluations = cfg.pred_evaluations;
    pred_cfg.sigma_frac = cfg.sigma_frac;
    pred_cfg.resolution = cfg.resolution;
    pred_cfg.seed = final_rng.split(100).seed();
    auto mean_fitness = [&surrogate](const ParameterVector& x) {
        return surrogate(x).mean;
    };
    IlluminationResult pred =
        map_elites(problem.spec, mean_fitness, problem.features, pred_cfg);

    return {std::move(pred.archive), std::move(samples), std::move(round_rows)};
}

void export_sail_rounds_csv(const std::vector<SailRound>& rounds, std::ostream& os) {
    os << "round,true_evals,acq_coverage,pred_qd_score_surrogate,surrogate_train_seconds\n";
    for (const auto& r : rounds) {
        os << r.round << "," << r.true_evals << "," << fmt_double(r.acq_coverage)
           << "," << fmt_double(r.pred_qd_score_surrogate) << ","
           << fmt_double(r.surrogate_train_seconds) << "\n";
    }
}

} // namespace sailkit
