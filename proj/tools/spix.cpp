// spix: superpixel benchmarking CLI
//
// Subcommands: generate, segment, eval, sweep, optimize, robustness, rank,
// report. Exit codes: 0 success, 1 usage error, 2 data error, 3 unexpected
// runtime failure.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "spix/spix.hpp"

namespace {

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        out.push_back(std::stoi(csv.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        out.push_back(std::stod(csv.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spix " SPIX_VERSION " - superpixel segmentation benchmark"};
    app.require_subcommand(1);

    std::string format = "csv";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));

    // generate
    auto* generate = app.add_subcommand("generate", "write a synthetic dataset");
    spix::GenerateOptions gen;
    generate->add_option("--out", gen.out_dir, "output dataset directory")->required();
    generate->add_option("--count", gen.count, "number of entries");
    generate->add_option("--seed", gen.seed, "base RNG seed");
    generate->add_option("--width", gen.width, "image width");
    generate->add_option("--height", gen.height, "image height");
    generate->add_option("--segments", gen.segments, "ground-truth segments per image");
    generate->add_option("--contrast", gen.contrast, "min per-channel contrast between segments");
    generate->add_option("--noise", gen.noise, "Gaussian pixel noise sigma");

    // segment
    auto* seg = app.add_subcommand("segment", "segment a dataset, writing label maps");
    spix::SegmentOptions seg_opt;
    seg_opt.jobs = spix::default_jobs();
    std::string seg_params;
    seg->add_option("--dataset", seg_opt.dataset, "dataset directory")->required();
    seg->add_option("--algo", seg_opt.algo, "slic|watershed|fh")->required();
    seg->add_option("--out", seg_opt.out_dir, "output directory")->required();
    seg->add_option("--params", seg_params, "params or anchors JSON file");
    seg->add_option("--k", seg_opt.k, "desired superpixel count");
    seg->add_option("--jobs", seg_opt.jobs, "parallel image jobs");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate precomputed label maps");
    spix::EvalOptions eval_opt;
    eval->add_option("--dataset", eval_opt.dataset, "dataset directory")->required();
    eval->add_option("--sp", eval_opt.sp_dir, "directory of <id>.png|csv label maps")->required();
    eval->add_option("--out", eval_opt.out_dir, "output directory")->required();
    eval->add_option("--algo", eval_opt.algo_name, "algorithm name for the CSV column");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run the K sweep and summarize");
    spix::SweepOptions sweep_opt;
    sweep_opt.jobs = spix::default_jobs();
    std::string sweep_params, sweep_k;
    bool no_timing = false;
    sweep->add_option("--dataset", sweep_opt.dataset, "dataset directory")->required();
    sweep->add_option("--algo", sweep_opt.algo, "slic|watershed|fh")->required();
    sweep->add_option("--out", sweep_opt.out_dir, "output directory")->required();
    sweep->add_option("--params", sweep_params, "params or anchors JSON file");
    sweep->add_option("--k", sweep_k, "comma-separated K list");
    sweep->add_option("--jobs", sweep_opt.jobs, "parallel image jobs");
    sweep->add_flag("--no-timing", no_timing, "omit runtime_ms for byte-stable output");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "grid-search parameters per K anchor");
    spix::OptimizeOptions opt_opt;
    std::string opt_k;
    optimize->add_option("--algo", opt_opt.algo, "slic|watershed|fh")->required();
    optimize->add_option("--grid", opt_opt.grid_file, "grid JSON file")->required();
    optimize->add_option("--train", opt_opt.train_dir, "training dataset directory")->required();
    optimize->add_option("--out", opt_opt.out_dir, "output directory")->required();
    optimize->add_option("--k", opt_k, "comma-separated anchor list");
    optimize->add_option("--k-deviation", opt_opt.k_deviation_limit,
                         "max mean |K_gen-K|/K before a combination is infeasible");

    // robustness
    auto* robust = app.add_subcommand("robustness", "measure degradation under perturbations");
    spix::RobustnessOptions rob_opt;
    std::string rob_params, rob_magnitudes;
    robust->add_option("--dataset", rob_opt.dataset, "dataset directory")->required();
    robust->add_option("--algo", rob_opt.algo, "slic|watershed|fh")->required();
    robust->add_option("--out", rob_opt.out_dir, "output directory")->required();
    robust->add_option("--perturb", rob_opt.perturbation,
                       "salt_pepper|gaussian_noise|box_blur|gaussian_blur|affine");
    robust->add_option("--magnitudes", rob_magnitudes, "comma-separated magnitudes");
    robust->add_option("--params", rob_params, "params or anchors JSON file");
    robust->add_option("--k", rob_opt.k, "desired superpixel count");
    robust->add_option("--seed", rob_opt.seed, "perturbation RNG seed");

    // rank
    auto* rank = app.add_subcommand("rank", "rank algorithms from summary files");
    spix::RankOptions rank_opt;
    rank->add_option("--out", rank_opt.out_dir, "output directory")->required();
    rank->add_option("summaries", rank_opt.summary_files, "summary.csv files")->required();

    // report
    auto* report = app.add_subcommand("report", "emit per-metric plot-data CSVs");
    spix::ReportOptions report_opt;
    report->add_option("--out", report_opt.out_dir, "output directory")->required();
    report->add_option("metrics", report_opt.metrics_files, "metrics.csv files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors collapse to exit code 1
    }

    try {
        if (*generate) {
            spix::run_generate(gen);
        } else if (*seg) {
            if (!seg_params.empty()) seg_opt.params_file = seg_params;
            spix::run_segment(seg_opt);
        } else if (*eval) {
            spix::run_eval(eval_opt);
        } else if (*sweep) {
            if (!sweep_params.empty()) sweep_opt.params_file = sweep_params;
            if (!sweep_k.empty()) sweep_opt.k_list = parse_int_list(sweep_k);
            sweep_opt.with_timing = !no_timing;
            const auto result = spix::run_sweep(sweep_opt);
            std::printf("%s on %s: amr=%.6f aue=%.6f auv=%.6f (%zu rows)\n",
                        sweep_opt.algo.c_str(), sweep_opt.dataset.filename().c_str(),
                        result.summary.amr, result.summary.aue, result.summary.auv, result.rows);
        } else if (*optimize) {
            if (!opt_k.empty()) opt_opt.anchors = parse_int_list(opt_k);
            const auto outcome = spix::run_optimize(opt_opt);
            for (const auto& [k, best] : outcome.anchors)
                std::printf("K=%d: objective=%.6f\n", k, best.second);
        } else if (*robust) {
            if (!rob_params.empty()) rob_opt.params_file = rob_params;
            if (!rob_magnitudes.empty()) rob_opt.magnitudes = parse_double_list(rob_magnitudes);
            const auto rows = spix::run_robustness(rob_opt);
            for (const auto& row : rows)
                std::printf("magnitude=%.4f rec=%.4f ue=%.4f\n", row.magnitude,
                            row.stats.rec.mean, row.stats.ue_np.mean);
        } else if (*rank) {
            const auto table = spix::run_rank(rank_opt);
            for (const auto& row : table.rows)
                std::printf("%s: avg_rank=%.2f\n", row.algorithm.c_str(), row.average_rank);
        } else if (*report) {
            spix::run_report(report_opt);
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatal: %s\n", e.what());
        return 3;
    }
    return 0;
}
