#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mssal/data_io.hpp"
#include "mssal/distributions.hpp"
#include "mssal/em.hpp"
#include "mssal/metrics.hpp"
#include "mssal/model_io.hpp"
#include "mssal/pca.hpp"
#include "mssal/rng.hpp"
#include "mssal/scenarios.hpp"
#include "mssal/selection.hpp"

namespace {

using namespace mssal;

// exit codes: 0 success, 1 modeling failure, 2 usage or IO error
constexpr int kExitModel = 1;
constexpr int kExitUsage = 2;

int fail(const std::exception& e, int code) {
    std::cerr << "error: " << e.what() << "\n";
    return code;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::string token;
    std::stringstream ss(text);
    while (std::getline(ss, token, ',')) {
        size_t pos = 0;
        int v = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("bad integer list: " + text);
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

struct FitOpts {
    std::string data, out, labels_out;
    int g = 2;
    FitConfig cfg;
};

int run_fit(const FitOpts& o) {
    DataMatrix data;
    try {
        data = read_csv(o.data);
        validate(o.cfg);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    FitResult fr;
    try {
        fr = fit_em(data, o.g, o.cfg);
    } catch (const std::invalid_argument& e) {
        return fail(e, kExitUsage);
    } catch (const std::exception& e) {
        return fail(e, kExitModel);
    }
    int rho = count_free_params(o.g, static_cast<int>(data.p()));
    fr.model.bic = bic(fr.model.loglik, rho, data.n());
    try {
        if (!o.out.empty()) {
            ModelMeta meta;
            meta.rho = rho;
            meta.n = data.n();
            meta.seed = o.cfg.seed;
            meta.converged = fr.converged;
            save_model(fr.model, meta, o.out);
        }
        if (!o.labels_out.empty()) write_labels(fr.map_labels, o.labels_out);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    std::printf("loglik = %.6f\n", fr.model.loglik);
    std::printf("BIC = %.6f\n", fr.model.bic);
    std::printf("iterations = %d\n", fr.n_iter);
    std::printf("converged = %s\n", fr.converged ? "yes" : "no");
    return 0;
}

struct SelectOpts {
    std::string data, out;
    int g_min = 1, g_max = 3;
    FitConfig cfg;
};

int run_select(const SelectOpts& o) {
    DataMatrix data;
    try {
        data = read_csv(o.data);
        validate(o.cfg);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    SelectionReport report;
    try {
        report = select_model(data, o.g_min, o.g_max, o.cfg);
    } catch (const std::invalid_argument& e) {
        return fail(e, kExitUsage);
    } catch (const std::exception& e) {
        return fail(e, kExitModel);
    }
    std::printf("%3s %16s %6s %16s %10s  %s\n", "G", "loglik", "rho", "BIC",
                "converged", "note");
    for (const GRecord& r : report.records) {
        std::printf("%3d %16.4f %6d %16.4f %10s  %s\n", r.g, r.loglik, r.rho,
                    r.bic, r.converged ? "yes" : "no", r.note.c_str());
    }
    std::printf("chosen G = %d\n", report.chosen_g);
    if (!o.out.empty()) {
        try {
            save_selection_report(report, data.n(), o.cfg.seed, o.out);
        } catch (const std::exception& e) {
            return fail(e, kExitUsage);
        }
    }
    return 0;
}

struct SimulateOpts {
    std::string scenario = "III", out_data, out_labels;
    int n_per_comp = 250;
    std::uint64_t seed = 1;
};

int run_simulate(const SimulateOpts& o) {
    try {
        ScenarioSpec spec;
        spec.scenario = parse_scenario(o.scenario);
        spec.n_per_component = o.n_per_comp;
        spec.seed = o.seed;
        auto [data, labels] = generate_scenario(spec);
        write_csv(data, o.out_data);
        if (!o.out_labels.empty()) write_labels(labels, o.out_labels);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    return 0;
}

struct ScoreOpts {
    std::string truth, pred;
};

int run_score(const ScoreOpts& o) {
    try {
        VectorXi truth = read_labels(o.truth);
        VectorXi pred = read_labels(o.pred);
        bool degenerate = false;
        double ari = adjusted_rand_index(truth, pred, &degenerate);
        std::printf("rand = %.6f\n", rand_index(truth, pred));
        std::printf("ari = %.6f%s\n", ari,
                    degenerate ? " (degenerate partition pair)" : "");
        std::printf("%s", format_text(cross_tab(truth, pred)).c_str());
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    return 0;
}

struct ContourOpts {
    std::string model, out;
    double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
    int grid = 50;
};

int run_contour(const ContourOpts& o) {
    try {
        MixtureModel model = load_model(o.model);
        if (model.dim() != 2) {
            throw std::invalid_argument(
                "contour needs a 2-dimensional model (this one has p = " +
                std::to_string(model.dim()) + ")");
        }
        if (o.grid < 1) throw std::invalid_argument("grid must be >= 1");
        auto coord = [&](double lo, double hi, int i) {
            if (o.grid == 1) return 0.5 * (lo + hi);
            return lo + (hi - lo) * i / (o.grid - 1);
        };
        DataMatrix table;
        table.column_names = {"x", "y", "density"};
        table.values.resize(static_cast<Eigen::Index>(o.grid) * o.grid, 3);
        Eigen::Index row = 0;
        VectorXd point(2);
        for (int i = 0; i < o.grid; ++i) {
            for (int j = 0; j < o.grid; ++j) {
                point[0] = coord(o.xmin, o.xmax, i);
                point[1] = coord(o.ymin, o.ymax, j);
                table.values(row, 0) = point[0];
                table.values(row, 1) = point[1];
                table.values(row, 2) = std::exp(mixture_log_density(point, model));
                ++row;
            }
        }
        write_csv(table, o.out);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    return 0;
}

struct PcaOpts {
    std::string data, components = "1,2", out;
    bool scale = false;
};

int run_pca(const PcaOpts& o) {
    try {
        DataMatrix data = read_csv(o.data);
        if (o.scale) {
            for (Eigen::Index j = 0; j < data.p(); ++j) {
                VectorXd col = data.values.col(j);
                double mean = col.mean();
                double sd = std::sqrt((col.array() - mean).square().sum() /
                                      (data.n() - 1));
                if (sd <= 0.0) {
                    throw std::invalid_argument(
                        "cannot standardize constant column \"" +
                        data.column_names[j] + "\"");
                }
                data.values.col(j) = (col.array() - mean) / sd;
            }
        }
        DataMatrix scores = pca_scores(data, parse_int_list(o.components));
        write_csv(scores, o.out);
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    return 0;
}

struct BenchOpts {
    std::string data, dims = "5,10,15,20,25", gs = "1,2,3", out;
    int iters = 100;
    std::uint64_t seed = 1;
};

int run_bench(const BenchOpts& o) {
    DataMatrix full;
    std::vector<int> dims, gs;
    try {
        full = read_csv(o.data);
        dims = parse_int_list(o.dims);
        gs = parse_int_list(o.gs);
        for (int p : dims) {
            if (p < 1 || p > full.p()) {
                throw std::invalid_argument("dimension " + std::to_string(p) +
                                            " exceeds the fixture's columns");
            }
        }
        if (o.iters < 1) throw std::invalid_argument("iters must be >= 1");
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }

    std::string csv = "p,g,seconds\n";
    try {
        for (int p : dims) {
            DataMatrix sub;
            sub.values = full.values.leftCols(p);
            sub.column_names.assign(full.column_names.begin(),
                                    full.column_names.begin() + p);
            for (int g : gs) {
                Rng rng(o.seed + static_cast<std::uint64_t>(g));
                VectorXi labels(sub.n());
                for (Eigen::Index i = 0; i < sub.n(); ++i) {
                    labels[i] = rng.uniform_int(g) + 1;
                }
                MixtureModel model = init_from_labels(sub, g, labels);
                FitConfig cfg;
                auto t0 = std::chrono::steady_clock::now();
                run_fixed_iterations(sub, model, cfg, o.iters);
                auto t1 = std::chrono::steady_clock::now();
                double secs = std::chrono::duration<double>(t1 - t0).count();
                char line[96];
                std::snprintf(line, sizeof line, "%d,%d,%.6f\n", p, g, secs);
                csv += line;
            }
        }
    } catch (const std::exception& e) {
        return fail(e, kExitModel);
    }
    std::printf("%s", csv.c_str());
    try {
        if (!o.out.empty()) {
            std::ofstream f(o.out);
            if (!f) throw std::runtime_error("cannot open for writing: " + o.out);
            f << csv;
        }
    } catch (const std::exception& e) {
        return fail(e, kExitUsage);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MSSAL mixture clustering"};
    app.require_subcommand(1);
    int rc = 0;

    FitOpts fit;
    CLI::App* cfit = app.add_subcommand("fit", "fit a G-component MSSAL mixture");
    cfit->add_option("--data", fit.data, "input CSV")->required();
    cfit->add_option("--g", fit.g, "number of components")->required();
    cfit->add_option("--starts", fit.cfg.n_starts, "random starts")->capture_default_str();
    cfit->add_option("--seed", fit.cfg.seed, "RNG seed")->capture_default_str();
    cfit->add_option("--max-iter", fit.cfg.max_iter, "EM iteration cap")->capture_default_str();
    cfit->add_option("--eps", fit.cfg.aitken_eps, "Aitken tolerance")->capture_default_str();
    cfit->add_option("--out", fit.out, "model JSON path");
    cfit->add_option("--labels-out", fit.labels_out, "MAP labels CSV path");
    cfit->callback([&] { rc = run_fit(fit); });

    SelectOpts sel;
    CLI::App* csel = app.add_subcommand("select", "BIC selection over a G range");
    csel->add_option("--data", sel.data, "input CSV")->required();
    csel->add_option("--g-min", sel.g_min, "smallest G")->capture_default_str();
    csel->add_option("--g-max", sel.g_max, "largest G")->capture_default_str();
    csel->add_option("--starts", sel.cfg.n_starts, "random starts")->capture_default_str();
    csel->add_option("--seed", sel.cfg.seed, "RNG seed")->capture_default_str();
    csel->add_option("--max-iter", sel.cfg.max_iter, "EM iteration cap")->capture_default_str();
    csel->add_option("--eps", sel.cfg.aitken_eps, "Aitken tolerance")->capture_default_str();
    csel->add_option("--out", sel.out, "selection report JSON path");
    csel->callback([&] { rc = run_select(sel); });

    SimulateOpts sim;
    CLI::App* csim = app.add_subcommand("simulate", "generate a scenario dataset");
    csim->add_option("--scenario", sim.scenario, "I, II or III")->required();
    csim->add_option("--n-per-comp", sim.n_per_comp, "points per component")->capture_default_str();
    csim->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    csim->add_option("--out-data", sim.out_data, "data CSV path")->required();
    csim->add_option("--out-labels", sim.out_labels, "truth labels CSV path");
    csim->callback([&] { rc = run_simulate(sim); });

    ScoreOpts score;
    CLI::App* cscore = app.add_subcommand("score", "compare two label files");
    cscore->add_option("--truth", score.truth, "truth labels CSV")->required();
    cscore->add_option("--pred", score.pred, "predicted labels CSV")->required();
    cscore->callback([&] { rc = run_score(score); });

    ContourOpts contour;
    CLI::App* ccont = app.add_subcommand("contour", "density grid for a 2-D model");
    ccont->add_option("--model", contour.model, "model JSON")->required();
    ccont->add_option("--xmin", contour.xmin, "window")->capture_default_str();
    ccont->add_option("--xmax", contour.xmax, "window")->capture_default_str();
    ccont->add_option("--ymin", contour.ymin, "window")->capture_default_str();
    ccont->add_option("--ymax", contour.ymax, "window")->capture_default_str();
    ccont->add_option("--grid", contour.grid, "points per axis")->capture_default_str();
    ccont->add_option("--out", contour.out, "output CSV")->required();
    ccont->callback([&] { rc = run_contour(contour); });

    PcaOpts pca;
    CLI::App* cpca = app.add_subcommand("pca", "project onto principal components");
    cpca->add_option("--data", pca.data, "input CSV")->required();
    cpca->add_option("--components", pca.components, "1-based indices, e.g. 1,3")->capture_default_str();
    cpca->add_flag("--scale", pca.scale, "standardize columns before the PCA");
    cpca->add_option("--out", pca.out, "scores CSV path")->required();
    cpca->callback([&] { rc = run_pca(pca); });

    BenchOpts bench;
    CLI::App* cbench = app.add_subcommand("bench", "fixed-iteration timing sweep");
    cbench->add_option("--data", bench.data, "input CSV")->required();
    cbench->add_option("--dims", bench.dims, "column counts, e.g. 5,10")->capture_default_str();
    cbench->add_option("--g", bench.gs, "component counts, e.g. 1,2,3")->capture_default_str();
    cbench->add_option("--iters", bench.iters, "EM iterations per cell")->capture_default_str();
    cbench->add_option("--seed", bench.seed, "RNG seed")->capture_default_str();
    cbench->add_option("--out", bench.out, "timing CSV path");
    cbench->callback([&] { rc = run_bench(bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return rc;
}
