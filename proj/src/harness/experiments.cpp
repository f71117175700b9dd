#include "sailkit/harness/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "sailkit/bench/problems.hpp"
#include "sailkit/hierarchy/kmeans.hpp"
#include "sailkit/util/format.hpp"

namespace sailkit {

namespace {

std::string digest_vectors(const std::vector<ParameterVector>& X) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& row : X) {
        for (double v : row) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001b3ULL;
            }
        }
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

Fig5ModelSummary summarize(std::vector<double> values) {
    Fig5ModelSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    s.median = n % 2 == 1 ? values[n / 2]
                          : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                  static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.variance = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    return s;
}

} // namespace

Fig5Result run_fig5(const RunConfig& cfg) {
    if (cfg.problem != "ackley-1d") {
        throw ConfigError("fig5 requires problem = ackley-1d");
    }
    const BenchmarkProblem& problem = get_problem(cfg.problem);
    const DomainSpec& spec = problem.spec;
    Rng master(cfg.seed);

    std::vector<ParameterVector> starts;
    for (std::size_t i = 0; i < cfg.fig5_starts; ++i) {
        const double t = cfg.fig5_starts == 1
                             ? 0.5
                             : static_cast<double>(i) /
                                   static_cast<double>(cfg.fig5_starts - 1);
        starts.push_back({spec.lower[0] + t * spec.range(0)});
    }

    Fig5Result result;
    for (std::size_t rep = 0; rep < cfg.fig5_replicates; ++rep) {
        Rng rep_rng = master.split(rep);
        Rng train_rng = rep_rng.split(0);
        std::vector<ParameterVector> X =
            initial_set(spec, cfg.fig5_training_size, train_rng);
        std::vector<double> y(X.size());
        for (std::size_t i = 0; i < X.size(); ++i) y[i] = problem.objective(X[i]);
        result.sample_digests.push_back(digest_vectors(X));

        // Both surrogates model the raw (minimization) objective; the
        // climber descends by ascending the negated mean.
        std::function<double(const ParameterVector&)> gp_surface, bann_surface;
        try {
            Rng gp_rng = rep_rng.split(1);
            GpFitConfig fit_cfg;
            const GpHyperparams hyper = fit_gp_hyperparams(X, y, fit_cfg, gp_rng);
            auto gp = std::make_shared<GpModel>(GpModel::train(X, y, hyper));
            gp_surface = [gp](const ParameterVector& x) { return -gp->predict(x).mean; };

            Rng bann_rng = rep_rng.split(2);
            BannConfig bann_cfg;
            auto bann = std::make_shared<BannEnsemble>(
                BannEnsemble::train(X, y, bann_cfg, bann_rng, &spec));
            bann_surface = [bann](const ParameterVector& x) {
                return -bann->predict(x).mean;
            };
        } catch (const std::exception&) {
            ++result.failed_replicates;
            result.sample_digests.back() += ":failed";
            continue;
        }

        for (std::size_t si = 0; si < starts.size(); ++si) {
            const HillClimbResult gp_end = hill_climb(gp_surface, starts[si], spec,
                                                      cfg.fig5_hill_step,
                                                      cfg.fig5_hill_iters);
            result.rows.push_back({"gp", rep, si, gp_end.x_best[0],
                                   problem.objective(gp_end.x_best)});
            const HillClimbResult bann_end = hill_climb(bann_surface, starts[si], spec,
                                                        cfg.fig5_hill_step,
                                                        cfg.fig5_hill_iters);
            result.rows.push_back({"bann", rep, si, bann_end.x_best[0],
                                   problem.objective(bann_end.x_best)});
        }
    }

    std::vector<double> gp_vals, bann_vals;
    for (const auto& row : result.rows) {
        (row.model == "gp" ? gp_vals : bann_vals).push_back(row.f_true);
    }
    result.gp = summarize(std::move(gp_vals));
    result.bann = summarize(std::move(bann_vals));
    return result;
}

namespace {

GpModel train_gp_auto(const std::vector<ParameterVector>& X,
                      const std::vector<double>& y, Rng& rng,
                      std::size_t subsample_cap = 150) {
    GpFitConfig fit_cfg;
    GpHyperparams hyper;
    if (X.size() > subsample_cap) {
        std::vector<std::size_t> idx(X.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        idx.resize(subsample_cap);
        std::vector<ParameterVector> Xs;
        std::vector<double> ys;
        for (std::size_t i : idx) {
            Xs.push_back(X[i]);
            ys.push_back(y[i]);
        }
        hyper = fit_gp_hyperparams(Xs, ys, fit_cfg, rng);
    } else {
        hyper = fit_gp_hyperparams(X, y, fit_cfg, rng);
    }
    return GpModel::train(X, y, hyper);
}

} // namespace

Fig6Result run_fig6(const RunConfig& cfg) {
    const BenchmarkProblem& problem = get_problem(cfg.problem);
    Rng master(cfg.seed);

    // Elite sample set from a plain illumination run.
    IlluminationConfig il = cfg.illumination;
    il.total_evaluations = cfg.fig6_sample_evaluations;
    il.init_count = std::min(il.init_count, il.total_evaluations);
    il.seed = master.split(0).seed();
    const IlluminationResult run = map_elites(problem.as_problem(), il);

    std::vector<Sample> samples;
    for (std::size_t flat : run.archive.occupied_bins()) {
        const Elite& e = *run.archive.bin(flat);
        samples.push_back({e.x, e.features, e.fitness});
    }
    Fig6Result result;
    result.total_samples = samples.size();
    result.input_dim = problem.spec.dim;
    if (samples.size() < cfg.fig6_segments) {
        throw std::runtime_error("fig6: fewer elite samples than segments");
    }

    std::vector<std::vector<double>> feats;
    for (const auto& s : samples) feats.push_back(s.features);
    Rng km_rng = master.split(1);
    const KMeansResult km = kmeans(feats, cfg.fig6_segments, 10, km_rng);

    // Per-segment 80/20 holdout, shuffled with a derived seed.
    std::vector<std::vector<std::size_t>> seg_train(cfg.fig6_segments),
        seg_test(cfg.fig6_segments);
    for (std::size_t c = 0; c < cfg.fig6_segments; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (km.assignment[i] == c) members.push_back(i);
        }
        Rng split_rng = master.split(100 + c);
        std::shuffle(members.begin(), members.end(), split_rng.engine());
        const std::size_t n_test = std::max<std::size_t>(1, members.size() / 5);
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < n_test ? seg_test[c] : seg_train[c]).push_back(members[i]);
        }
    }

    // One flat model on the union of the training parts, full space.
    std::vector<ParameterVector> flat_X;
    std::vector<double> flat_y;
    for (const auto& part : seg_train) {
        for (std::size_t i : part) {
            flat_X.push_back(samples[i].x);
            flat_y.push_back(samples[i].fitness);
        }
    }
    Rng flat_rng = master.split(2);
    const GpModel flat_model = train_gp_auto(flat_X, flat_y, flat_rng);

    for (std::size_t c = 0; c < cfg.fig6_segments; ++c) {
        Fig6Row row;
        row.segment = c;
        row.size = seg_train[c].size() + seg_test[c].size();

        double flat_sse = 0.0;
        for (std::size_t i : seg_test[c]) {
            const double err = flat_model.predict(samples[i].x).mean - samples[i].fitness;
            flat_sse += err * err;
        }
        row.flat_mse = seg_test[c].empty()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : flat_sse / static_cast<double>(seg_test[c].size());

        if (row.size < cfg.fig6_min_segment || seg_train[c].size() < 4 ||
            seg_test[c].empty()) {
            row.too_small = true;
            row.local_mse = std::numeric_limits<double>::quiet_NaN();
            result.rows.push_back(row);
            continue;
        }

        std::vector<ParameterVector> seg_X;
        std::vector<double> seg_y;
        for (std::size_t i : seg_train[c]) {
            seg_X.push_back(samples[i].x);
            seg_y.push_back(cfg.fig6_residual_mode
                                ? samples[i].fitness -
                                      flat_model.predict(samples[i].x).mean
                                : samples[i].fitness);
        }
        const PcaProjection pca = pca_fit(seg_X, cfg.fig6_pca_cutoff);
        row.retained_dims = pca.retained;
        std::vector<ParameterVector> seg_Z;
        for (const auto& x : seg_X) seg_Z.push_back(pca_project(pca, x));
        try {
            Rng local_rng = master.split(200 + c);
            const GpModel local = train_gp_auto(seg_Z, seg_y, local_rng);
            double local_sse = 0.0;
            for (std::size_t i : seg_test[c]) {
                double pred = local.predict(pca_project(pca, samples[i].x)).mean;
                if (cfg.fig6_residual_mode) {
                    pred += flat_model.predict(samples[i].x).mean;
                }
                const double err = pred - samples[i].fitness;
                local_sse += err * err;
            }
            row.local_mse = local_sse / static_cast<double>(seg_test[c].size());
        } catch (const std::exception&) {
            row.too_small = true;
            row.local_mse = std::numeric_limits<double>::quiet_NaN();
        }
        result.rows.push_back(row);
    }
    return result;
}

double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("spearman_correlation: need two equal-length series");
    }
    auto ranks = [](const std::vector<double>& v) {
        const std::size_t n = v.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
            for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va <= 0.0 || vb <= 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

std::vector<BakeoffRow> run_bakeoff(const RunConfig& cfg) {
    const BenchmarkProblem& problem = get_problem(cfg.problem);
    const DomainSpec& spec = problem.spec;
    Rng master(cfg.seed);

    Rng test_rng = master.split(0);
    std::vector<ParameterVector> test_X;
    std::vector<double> test_y;
    for (std::size_t i = 0; i < cfg.bakeoff_test_points; ++i) {
        test_X.push_back(random_vector(spec, test_rng));
        test_y.push_back(problem.fitness(test_X.back()));
    }

    std::vector<BakeoffRow> rows;
    auto evaluate_model = [&](const std::string& name, std::size_t n,
                              const std::function<Prediction(const ParameterVector&)>& predict,
                              double train_s) {
        BakeoffRow row;
        row.model = name;
        row.n = n;
        row.train_s = train_s;
        std::vector<double> preds(test_X.size());
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < test_X.size(); ++i) preds[i] = predict(test_X[i]).mean;
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        row.predict_us = secs * 1e6 / static_cast<double>(test_X.size());
        double sse = 0.0;
        for (std::size_t i = 0; i < preds.size(); ++i) {
            sse += (preds[i] - test_y[i]) * (preds[i] - test_y[i]);
        }
        row.rmse = std::sqrt(sse / static_cast<double>(preds.size()));
        row.spearman = spearman_correlation(preds, test_y);
        rows.push_back(row);
    };

    for (std::size_t idx = 0; idx < cfg.bakeoff_sizes.size(); ++idx) {
        const std::size_t n = cfg.bakeoff_sizes[idx];
        Rng cell_rng = master.split(1 + idx);
        std::vector<Sample> samples;
        std::vector<ParameterVector> X;
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            Sample s;
            s.x = random_vector(spec, cell_rng);
            s.features = problem.features(s.x);
            s.fitness = problem.fitness(s.x);
            X.push_back(s.x);
            y.push_back(s.fitness);
            samples.push_back(std::move(s));
        }

        try {
            Rng gp_rng = cell_rng.split(1);
            const auto t0 = std::chrono::steady_clock::now();
            auto gp = std::make_shared<GpModel>(train_gp_auto(X, y, gp_rng));
            const double ts =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            evaluate_model("gp", n, [gp](const ParameterVector& x) { return gp->predict(x); }, ts);
        } catch (const std::exception&) {
            rows.push_back({"gp", n, 0, 0, 0, 0, true});
        }
        try {
            Rng bann_rng = cell_rng.split(2);
            BannConfig bc = cfg.sail.bann;
            const auto t0 = std::chrono::steady_clock::now();
            auto bann = std::make_shared<BannEnsemble>(
                BannEnsemble::train(X, y, bc, bann_rng, &spec));
            const double ts =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            evaluate_model("bann", n,
                           [bann](const ParameterVector& x) { return bann->predict(x); }, ts);
        } catch (const std::exception&) {
            rows.push_back({"bann", n, 0, 0, 0, 0, true});
        }
        try {
            Rng h_rng = cell_rng.split(3);
            HierarchyConfig hc = cfg.sail.hierarchy;
            const auto t0 = std::chrono::steady_clock::now();
            auto h = std::make_shared<HierarchicalSurrogate>(
                HierarchicalSurrogate::build(samples, hc, h_rng));
            const double ts =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            auto features = problem.features;
            evaluate_model("hierarchical", n,
                           [h, features](const ParameterVector& x) {
                               return h->predict(x, features(x));
                           },
                           ts);
        } catch (const std::exception&) {
            rows.push_back({"hierarchical", n, 0, 0, 0, 0, true});
        }
        // Oracle row: the true objective as its own surrogate.
        evaluate_model("true", n,
                       [&problem](const ParameterVector& x) {
                           return Prediction{problem.fitness(x), 0.0};
                       },
                       0.0);
    }
    return rows;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::string fig5_rows_csv(const Fig5Result& r) {
    std::ostringstream os;
    os << "model,replicate,start_index,x_final,f_true\n";
    for (const auto& row : r.rows) {
        os << row.model << "," << row.replicate << "," << row.start_index << ","
           << fmt_double(row.x_final) << "," << fmt_double(row.f_true) << "\n";
    }
    return os.str();
}

std::string fig5_summary_csv(const Fig5Result& r) {
    std::ostringstream os;
    os << "model,median,variance,count,failed_replicates\n";
    os << "gp," << fmt_double(r.gp.median) << "," << fmt_double(r.gp.variance)
       << "," << r.gp.count << "," << r.failed_replicates << "\n";
    os << "bann," << fmt_double(r.bann.median) << "," << fmt_double(r.bann.variance)
       << "," << r.bann.count << "," << r.failed_replicates << "\n";
    return os.str();
}

std::string fig6_csv(const Fig6Result& r) {
    std::ostringstream os;
    os << "segment,size,retained_dims,local_mse,flat_mse,too_small\n";
    for (const auto& row : r.rows) {
        os << row.segment << "," << row.size << "," << row.retained_dims << ","
           << (std::isnan(row.local_mse) ? "nan" : fmt_double(row.local_mse)) << ","
           << (std::isnan(row.flat_mse) ? "nan" : fmt_double(row.flat_mse)) << ","
           << (row.too_small ? 1 : 0) << "\n";
    }
    return os.str();
}

std::string bakeoff_csv(const std::vector<BakeoffRow>& rows) {
    std::ostringstream os;
    os << "model,n,train_s,predict_us,rmse,spearman\n";
    for (const auto& row : rows) {
        if (row.failed) {
            os << row.model << "," << row.n << ",failed,failed,failed,failed\n";
        } else {
            os << row.model << "," << row.n << "," << fmt_double(row.train_s) << ","
               << fmt_double(row.predict_us) << "," << fmt_double(row.rmse) << ","
               << fmt_double(row.spearman) << "\n";
        }
    }
    return os.str();
}

std::string bakeoff_accuracy_csv(const std::vector<BakeoffRow>& rows) {
    std::ostringstream os;
    os << "model,n,rmse,spearman\n";
    for (const auto& row : rows) {
        if (row.failed) {
            os << row.model << "," << row.n << ",failed,failed\n";
        } else {
            os << row.model << "," << row.n << "," << fmt_double(row.rmse) << ","
               << fmt_double(row.spearman) << "\n";
        }
    }
    return os.str();
}

std::string samples_csv(const std::vector<Sample>& samples) {
    std::ostringstream os;
    if (samples.empty()) return "";
    for (std::size_t i = 0; i < samples[0].x.size(); ++i) os << (i ? "," : "") << "x_" << i;
    for (std::size_t i = 0; i < samples[0].features.size(); ++i) os << ",feat_" << i;
    os << ",fitness\n";
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            os << (i ? "," : "") << fmt_double(s.x[i]);
        }
        for (double f : s.features) os << "," << fmt_double(f);
        os << "," << fmt_double(s.fitness) << "\n";
    }
    return os.str();
}

} // namespace

void run_experiment(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();

    RunManifest manifest;
    manifest.config = cfg.canonical();
    manifest.seed = cfg.seed;

    switch (cfg.experiment) {
    case ExperimentKind::MapElites: {
        const BenchmarkProblem& problem = get_problem(cfg.problem);
        IlluminationConfig il = cfg.illumination;
        il.seed = cfg.seed;
        const IlluminationResult res = map_elites(problem.as_problem(), il);
        {
            std::ostringstream os;
            res.archive.export_csv(os);
            write_file(out_dir / "archive.csv", os.str());
        }
        {
            std::ostringstream os;
            export_history_csv(res.history, os);
            write_file(out_dir / "history.csv", os.str());
        }
        manifest.add_file(out_dir, "archive.csv");
        manifest.add_file(out_dir, "history.csv");
        break;
    }
    case ExperimentKind::Sail: {
        const BenchmarkProblem& problem = get_problem(cfg.problem);
        SailConfig sc = cfg.sail;
        sc.seed = cfg.seed;
        const SailResult res = sail(problem.as_problem(), sc);
        {
            std::ostringstream os;
            res.prediction_archive.export_csv(os);
            write_file(out_dir / "prediction_archive.csv", os.str());
        }
        write_file(out_dir / "samples.csv", samples_csv(res.true_samples));
        {
            std::ostringstream os;
            export_sail_rounds_csv(res.rounds, os);
            write_file(out_dir / "rounds.csv", os.str());
        }
        manifest.add_file(out_dir, "prediction_archive.csv");
        manifest.add_file(out_dir, "samples.csv");
        manifest.add_timing_file("rounds.csv"); // contains wall-clock columns
        break;
    }
    case ExperimentKind::Fig5: {
        const Fig5Result res = run_fig5(cfg);
        write_file(out_dir / "optima.csv", fig5_rows_csv(res));
        write_file(out_dir / "summary.csv", fig5_summary_csv(res));
        {
            std::ostringstream os;
            os << "replicate,training_digest\n";
            for (std::size_t i = 0; i < res.sample_digests.size(); ++i) {
                os << i << "," << res.sample_digests[i] << "\n";
            }
            write_file(out_dir / "sample_digests.csv", os.str());
        }
        manifest.add_file(out_dir, "optima.csv");
        manifest.add_file(out_dir, "summary.csv");
        manifest.add_file(out_dir, "sample_digests.csv");
        break;
    }
    case ExperimentKind::Fig6: {
        const Fig6Result res = run_fig6(cfg);
        write_file(out_dir / "segments.csv", fig6_csv(res));
        manifest.add_file(out_dir, "segments.csv");
        break;
    }
    case ExperimentKind::Bakeoff: {
        const std::vector<BakeoffRow> rows = run_bakeoff(cfg);
        write_file(out_dir / "bakeoff.csv", bakeoff_csv(rows));
        write_file(out_dir / "bakeoff_accuracy.csv", bakeoff_accuracy_csv(rows));
        manifest.add_timing_file("bakeoff.csv");
        manifest.add_file(out_dir, "bakeoff_accuracy.csv");
        break;
    }
    }

    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest.write(out_dir);
}

} // namespace sailkit
