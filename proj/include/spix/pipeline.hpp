#pragma once

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "spix/algorithms/segment.hpp"
#include "spix/csv.hpp"
#include "spix/dataset.hpp"
#include "spix/label_codec.hpp"
#include "spix/manifest.hpp"
#include "spix/metrics.hpp"
#include "spix/optimization.hpp"
#include "spix/robustness.hpp"
#include "spix/summary.hpp"
#include "spix/synthetic.hpp"

namespace spix {

// Monotonic wall time of a code region, in nanoseconds.
template <typename F>
std::int64_t measure_runtime(F&& region) {
    const auto t0 = std::chrono::steady_clock::now();
    region();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

inline int default_jobs() {
    if (const char* env = std::getenv("SPIX_BENCH_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

namespace detail {

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int count = std::min<std::size_t>(jobs, n);
    workers.reserve(count);
    for (int t = 0; t < count; ++t)
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& w : workers) w.join();
}

}  // namespace detail

// ---- parameter (de)serialization ------------------------------------------

inline nlohmann::ordered_json params_to_json(const AlgorithmParams& p) {
    nlohmann::ordered_json j;
    j["k"] = p.k_desired;
    j["compactness"] = p.compactness;
    j["iterations"] = p.iterations;
    j["color_space"] = to_string(p.color_space);
    if (!p.extra.empty()) {
        nlohmann::ordered_json e;
        for (const auto& [key, value] : p.extra) e[key] = value;
        j["extra"] = e;
    }
    return j;
}

inline AlgorithmParams params_from_json(const nlohmann::json& j) {
    AlgorithmParams p;
    if (j.contains("k")) p.k_desired = j.at("k").get<int>();
    if (j.contains("compactness")) p.compactness = j.at("compactness").get<double>();
    if (j.contains("iterations")) p.iterations = j.at("iterations").get<int>();
    if (j.contains("color_space"))
        p.color_space = color_space_from_string(j.at("color_space").get<std::string>());
    if (j.contains("extra"))
        for (const auto& [key, value] : j.at("extra").items())
            p.extra[key] = value.get<double>();
    return p;
}

inline AlgorithmParams default_params(const std::string& algo, int k) {
    AlgorithmParams p;
    p.k_desired = k;
    if (algo == "slic") {
        p.color_space = ColorSpace::lab;
        p.compactness = 10.0;
        p.iterations = 10;
    } else if (algo == "watershed") {
        p.color_space = ColorSpace::gray;
        p.compactness = 0.5;
    } else if (algo == "fh") {
        p.color_space = ColorSpace::rgb;
        p.extra["fh_k"] = 200000.0 / k;
    } else {
        throw std::invalid_argument("unknown algorithm id: " + algo);
    }
    return p;
}

// Either a fixed parameter set or per-K anchors to interpolate between.
struct ParamsSource {
    std::optional<AlgorithmParams> fixed;
    std::optional<OptimizationOutcome> anchors;
    std::string algorithm;

    AlgorithmParams for_k(int k) const {
        if (anchors) return interpolate_params(*anchors, k);
        if (fixed) {
            AlgorithmParams p = *fixed;
            p.k_desired = k;
            return p;
        }
        return default_params(algorithm, k);
    }
};

inline ParamsSource load_params_source(const std::string& algo,
                                       const std::optional<std::filesystem::path>& file) {
    ParamsSource source;
    source.algorithm = algo;
    if (!file) return source;
    const auto bytes = read_file_bytes(*file);
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    if (j.contains("anchors")) {
        OptimizationOutcome outcome;
        for (const auto& [key, value] : j.at("anchors").items())
            outcome.anchors[std::stoi(key)] = {params_from_json(value),
                                               value.value("objective", 0.0)};
        source.anchors = std::move(outcome);
    } else {
        source.fixed = params_from_json(j);
    }
    return source;
}

// FH has no direct K control; its fragment threshold follows the same
// quarter-of-mean-size rule the other algorithms use, unless set explicitly.
inline AlgorithmParams params_for_image(const AlgorithmParams& base, const std::string& algo,
                                        const Image& image) {
    AlgorithmParams p = base;
    if (algo == "fh" && !p.extra.count("fh_min_size"))
        p.extra["fh_min_size"] = static_cast<double>(
            image.pixel_count() / static_cast<std::size_t>(p.k_desired) / 4);
    return p;
}

// ---- generate --------------------------------------------------------------

struct GenerateOptions {
    std::filesystem::path out_dir;
    int count = 10;
    std::uint64_t seed = 1;
    int width = 160;
    int height = 120;
    int segments = 20;
    double contrast = 100.0;
    double noise = 5.0;
};

inline void run_generate(const GenerateOptions& opt) {
    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    for (int i = 0; i < opt.count; ++i) {
        SyntheticSpec spec;
        spec.width = opt.width;
        spec.height = opt.height;
        spec.num_segments = opt.segments;
        spec.color_contrast = opt.contrast;
        spec.noise_sigma = opt.noise;
        spec.seed = derive_seed(opt.seed, static_cast<std::uint64_t>(i));
        DatasetEntry entry = generate_synthetic_entry(spec);
        char id[32];
        std::snprintf(id, sizeof id, "synth_%04d", i);
        entry.id = id;
        write_entry(opt.out_dir, entry);
    }
    RunManifest manifest;
    manifest.command = "generate";
    manifest.arguments = {{"out", opt.out_dir.string()},
                          {"count", std::to_string(opt.count)},
                          {"seed", std::to_string(opt.seed)},
                          {"width", std::to_string(opt.width)},
                          {"height", std::to_string(opt.height)},
                          {"segments", std::to_string(opt.segments)},
                          {"contrast", format_fixed(opt.contrast, 3)},
                          {"noise", format_fixed(opt.noise, 3)}};
    manifest.stamp();
    manifest.write(opt.out_dir);
}

// ---- segment ---------------------------------------------------------------

struct SegmentOptions {
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    std::string algo = "slic";
    std::optional<std::filesystem::path> params_file;
    int k = 400;
    int jobs = 1;
};

inline void run_segment(const SegmentOptions& opt) {
    namespace fs = std::filesystem;
    const auto ids = dataset_ids(opt.dataset);
    const ParamsSource source = load_params_source(opt.algo, opt.params_file);
    const AlgorithmParams base = source.for_k(opt.k);
    fs::create_directories(opt.out_dir);

    RunManifest manifest;
    manifest.command = "segment";
    manifest.arguments = {{"dataset", opt.dataset.string()},
                          {"algo", opt.algo},
                          {"k", std::to_string(opt.k)},
                          {"out", opt.out_dir.string()}};
    if (opt.params_file) {
        manifest.arguments["params"] = opt.params_file->string();
        manifest.add_input(*opt.params_file);
    }

    detail::parallel_for(ids.size(), opt.jobs, [&](std::size_t i) {
        const DatasetEntry entry = load_entry(opt.dataset, ids[i]);
        const AlgorithmParams params = params_for_image(base, opt.algo, entry.image);
        const SegmentationResult result = segment(opt.algo, entry.image, params);
        write_file_atomic(opt.out_dir / (entry.id + ".png"),
                          encode_label_png16(result.labels));
    });
    for (const auto& id : ids) manifest.add_input(opt.dataset / "images" / (id + ".png"));
    manifest.stamp();
    manifest.write(opt.out_dir);
}

// ---- eval ------------------------------------------------------------------

struct EvalOptions {
    std::filesystem::path dataset;
    std::filesystem::path sp_dir;       // precomputed label maps, <id>.png|csv
    std::filesystem::path out_dir;
    std::string algo_name = "external";
};

inline LabelMap load_label_file(const std::filesystem::path& base_no_ext) {
    namespace fs = std::filesystem;
    const fs::path png = base_no_ext.string() + ".png";
    const fs::path csv = base_no_ext.string() + ".csv";
    if (fs::exists(png)) return decode_label_png(read_file_bytes(png));
    if (fs::exists(csv)) return decode_label_map(read_file_bytes(csv), LabelFormat::csv);
    throw std::runtime_error("no label map found at " + base_no_ext.string() + ".{png,csv}");
}

inline void run_eval(const EvalOptions& opt) {
    namespace fs = std::filesystem;
    const auto ids = dataset_ids(opt.dataset);
    const std::string dataset_name = opt.dataset.filename().string();
    fs::create_directories(opt.out_dir);

    std::string csv = std::string(kMetricsCsvHeader) + "\n";
    for (const auto& id : ids) {
        const DatasetEntry entry = load_entry(opt.dataset, id);
        const LabelMap sp = load_label_file(opt.sp_dir / id);
        const MetricRecord record = evaluate_entry(entry.image, entry.ground_truths, sp);
        csv += metrics_csv_row(dataset_name, id, opt.algo_name, 0, record, false) + "\n";
    }
    write_file_atomic(opt.out_dir / "metrics.csv", csv);

    RunManifest manifest;
    manifest.command = "eval";
    manifest.arguments = {{"dataset", opt.dataset.string()},
                          {"sp", opt.sp_dir.string()},
                          {"algo", opt.algo_name},
                          {"out", opt.out_dir.string()}};
    manifest.stamp();
    manifest.write(opt.out_dir);
}

// ---- sweep -----------------------------------------------------------------

inline const std::vector<int>& default_k_list() {
    static const std::vector<int> ks = {200,  300,  400,  600,  800,  1000, 1200, 1400, 1600,
                                        1800, 2000, 2400, 2800, 3200, 3600, 4000, 4600, 5200};
    return ks;
}

struct SweepOptions {
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    std::string algo = "slic";
    std::optional<std::filesystem::path> params_file;
    std::vector<int> k_list = default_k_list();
    int jobs = 1;
    bool with_timing = true;
};

struct SweepResult {
    SummaryValues summary;
    std::size_t rows = 0;
};

inline SweepResult run_sweep(const SweepOptions& opt) {
    namespace fs = std::filesystem;
    const auto entries = load_dataset(opt.dataset);
    if (entries.empty()) throw std::runtime_error("sweep: empty dataset");
    const std::string dataset_name = opt.dataset.filename().string();
    const ParamsSource source = load_params_source(opt.algo, opt.params_file);
    fs::create_directories(opt.out_dir);

    struct Row {
        std::string image_id;
        int k_desired;
        MetricRecord record;
        bool ok;
    };
    std::vector<Row> rows;
    std::vector<std::pair<double, double>> rec_pts, ue_pts, ev_pts;

    for (const int k : opt.k_list) {
        const AlgorithmParams base = source.for_k(k);
        std::vector<Row> k_rows(entries.size());
        detail::parallel_for(entries.size(), opt.jobs, [&](std::size_t i) {
            Row row{entries[i].id, k, {}, false};
            try {
                const AlgorithmParams params = params_for_image(base, opt.algo, entries[i].image);
                const SegmentationResult seg = segment(opt.algo, entries[i].image, params);
                row.record = evaluate_entry(entries[i].image, entries[i].ground_truths,
                                            seg.labels);
                row.record.runtime_ns = seg.runtime_ns;
                row.ok = true;
            } catch (const std::exception&) {
                row.ok = false;  // infeasible row, kept out of the aggregates
            }
            k_rows[i] = std::move(row);
        });

        std::vector<MetricRecord> ok_records;
        for (auto& row : k_rows) {
            if (row.ok) ok_records.push_back(row.record);
            rows.push_back(std::move(row));
        }
        if (!ok_records.empty()) {
            const AggregateStats stats = aggregate(ok_records);
            rec_pts.emplace_back(stats.k_mean, stats.rec.mean);
            ue_pts.emplace_back(stats.k_mean, stats.ue_np.mean);
            ev_pts.emplace_back(stats.k_mean, stats.ev.mean);
        }
    }

    // fixed row order: dataset, image id, then K ascending
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.image_id != b.image_id) return a.image_id < b.image_id;
        return a.k_desired < b.k_desired;
    });
    std::string csv = std::string(kMetricsCsvHeader) + "\n";
    std::size_t written = 0;
    for (const auto& row : rows) {
        if (row.ok) {
            csv += metrics_csv_row(dataset_name, row.image_id, opt.algo, row.k_desired,
                                   row.record, opt.with_timing) + "\n";
            ++written;
        } else {
            csv += metrics_csv_infeasible_row(dataset_name, row.image_id, opt.algo,
                                              row.k_desired) + "\n";
        }
    }
    write_file_atomic(opt.out_dir / "metrics.csv", csv);

    if (rec_pts.empty()) throw std::runtime_error("sweep: every configuration failed");
    const SummaryValues summary = amr_aue_auv(make_curve(rec_pts), make_curve(ue_pts),
                                              make_curve(ev_pts));
    std::string summary_csv = "algorithm,dataset,amr,aue,auv\n";
    summary_csv += opt.algo + ',' + dataset_name + ',' + format_fixed(summary.amr, 6) + ',' +
                   format_fixed(summary.aue, 6) + ',' + format_fixed(summary.auv, 6) + "\n";
    write_file_atomic(opt.out_dir / "summary.csv", summary_csv);

    RunManifest manifest;
    manifest.command = "sweep";
    std::string k_arg;
    for (const int k : opt.k_list) k_arg += (k_arg.empty() ? "" : ",") + std::to_string(k);
    manifest.arguments = {{"dataset", opt.dataset.string()},
                          {"algo", opt.algo},
                          {"k", k_arg},
                          {"out", opt.out_dir.string()},
                          {"timing", opt.with_timing ? "true" : "false"}};
    if (opt.params_file) {
        manifest.arguments["params"] = opt.params_file->string();
        manifest.add_input(*opt.params_file);
    }
    manifest.stamp();
    manifest.write(opt.out_dir);
    return {summary, written};
}

// ---- optimize --------------------------------------------------------------

struct OptimizeOptions {
    std::filesystem::path train_dir;
    std::filesystem::path grid_file;
    std::filesystem::path out_dir;
    std::string algo = "slic";
    std::vector<int> anchors = {400, 1200, 3600};
    double k_deviation_limit = 0.5;
};

inline ParameterGrid load_grid(const std::filesystem::path& file) {
    const auto bytes = read_file_bytes(file);
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    ParameterGrid grid;
    for (const auto& [name, values] : j.items()) {
        std::vector<ParamValue> axis;
        for (const auto& v : values) {
            if (v.is_string()) axis.emplace_back(v.get<std::string>());
            else axis.emplace_back(v.get<double>());
        }
        grid.add_axis(name, std::move(axis));
    }
    return grid;
}

inline OptimizationOutcome run_optimize(const OptimizeOptions& opt) {
    namespace fs = std::filesystem;
    const auto train = load_dataset(opt.train_dir);
    const ParameterGrid grid = load_grid(opt.grid_file);
    fs::create_directories(opt.out_dir);

    GridSearchOptions gopt;
    gopt.k_deviation_limit = opt.k_deviation_limit;
    const Segmenter segmenter = [&](const Image& image, const AlgorithmParams& params) {
        return segment(opt.algo, image, params_for_image(params, opt.algo, image));
    };

    OptimizationOutcome outcome;
    for (const int k : opt.anchors) {
        std::vector<GridTraceRow> trace;
        outcome.anchors[k] = grid_search(segmenter, grid, train, k, gopt, &trace);
        outcome.traces[k] = std::move(trace);
    }

    nlohmann::ordered_json j;
    j["algorithm"] = opt.algo;
    nlohmann::ordered_json anchors;
    for (const auto& [k, best] : outcome.anchors) {
        nlohmann::ordered_json a = params_to_json(best.first);
        a["objective"] = best.second;
        anchors[std::to_string(k)] = a;
    }
    j["anchors"] = anchors;
    write_file_atomic(opt.out_dir / ("params_" + opt.algo + ".json"), j.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "optimize";
    std::string k_arg;
    for (const int k : opt.anchors) k_arg += (k_arg.empty() ? "" : ",") + std::to_string(k);
    manifest.arguments = {{"train", opt.train_dir.string()},
                          {"grid", opt.grid_file.string()},
                          {"algo", opt.algo},
                          {"k", k_arg},
                          {"out", opt.out_dir.string()}};
    manifest.add_input(opt.grid_file);
    manifest.stamp();
    manifest.write(opt.out_dir);
    return outcome;
}

// ---- robustness ------------------------------------------------------------

struct RobustnessOptions {
    std::filesystem::path dataset;
    std::filesystem::path out_dir;
    std::string algo = "slic";
    std::optional<std::filesystem::path> params_file;
    std::string perturbation = "salt_pepper";
    std::vector<double> magnitudes;  // empty: kind-specific default
    int k = 400;
    std::uint64_t seed = 1;
};

inline std::vector<double> default_magnitudes(PerturbationKind kind) {
    switch (kind) {
        case PerturbationKind::salt_pepper: return {0, 0.04, 0.08, 0.12, 0.16};
        case PerturbationKind::box_blur: return {0, 5, 9, 13, 17};
        case PerturbationKind::gaussian_noise: return {0, 10, 20, 30, 40};
        case PerturbationKind::gaussian_blur: return {0, 1, 2, 3, 4};
        default: return {0, 5, 10, 15, 20};  // affine: rotation degrees
    }
}

inline std::vector<RobustnessRow> run_robustness(const RobustnessOptions& opt) {
    namespace fs = std::filesystem;
    const auto entries = load_dataset(opt.dataset);
    const PerturbationKind kind = perturbation_from_string(opt.perturbation);
    const std::vector<double> magnitudes =
        opt.magnitudes.empty() ? default_magnitudes(kind) : opt.magnitudes;
    const ParamsSource source = load_params_source(opt.algo, opt.params_file);
    AlgorithmParams params = source.for_k(opt.k);
    if (!entries.empty())
        params = params_for_image(params, opt.algo, entries.front().image);

    const auto rows = robustness_sweep(opt.algo, params, entries, kind, magnitudes, opt.seed);

    fs::create_directories(opt.out_dir);
    std::string csv = "algorithm,perturbation,magnitude,rec_mean,ue_np_mean,ev_mean,"
                      "k_raw_mean,k_raw_std\n";
    for (const auto& row : rows)
        csv += opt.algo + ',' + opt.perturbation + ',' + format_fixed(row.magnitude, 6) + ',' +
               format_fixed(row.stats.rec.mean, 6) + ',' + format_fixed(row.stats.ue_np.mean, 6) +
               ',' + format_fixed(row.stats.ev.mean, 6) + ',' + format_fixed(row.k_raw_mean, 6) +
               ',' + format_fixed(row.k_raw_std, 6) + "\n";
    write_file_atomic(opt.out_dir / "robustness.csv", csv);

    RunManifest manifest;
    manifest.command = "robustness";
    manifest.arguments = {{"dataset", opt.dataset.string()},
                          {"algo", opt.algo},
                          {"perturb", opt.perturbation},
                          {"k", std::to_string(opt.k)},
                          {"seed", std::to_string(opt.seed)},
                          {"out", opt.out_dir.string()}};
    manifest.stamp();
    manifest.write(opt.out_dir);
    return rows;
}

// ---- rank ------------------------------------------------------------------

struct RankOptions {
    std::vector<std::filesystem::path> summary_files;
    std::filesystem::path out_dir;
};

inline RankTable run_rank(const RankOptions& opt) {
    namespace fs = std::filesystem;
    if (opt.summary_files.empty()) throw std::runtime_error("rank: no summary files");

    std::map<std::string, std::map<std::string, std::pair<double, double>>> scores;
    for (const auto& file : opt.summary_files) {
        const auto rows = read_csv(file.string());
        if (rows.empty() || rows.front().size() < 5 || rows.front()[0] != "algorithm")
            throw std::runtime_error("rank: malformed summary file " + file.string());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 5)
                throw std::runtime_error("rank: malformed row in " + file.string());
            scores[r[1]][r[0]] = {std::stod(r[2]), std::stod(r[3])};
        }
    }
    const RankTable table = rank_algorithms(scores);

    fs::create_directories(opt.out_dir);
    std::string csv = "algorithm,avg_rank,mean_amr,mean_aue,rank_counts\n";
    for (const auto& row : table.rows) {
        std::string counts;
        for (const auto& [rank, freq] : row.rank_distribution) {
            if (!counts.empty()) counts += '|';
            counts += std::to_string(rank) + ':' + std::to_string(freq);
        }
        csv += row.algorithm + ',' + format_fixed(row.average_rank, 6) + ',' +
               format_fixed(row.mean_amr, 6) + ',' + format_fixed(row.mean_aue, 6) + ',' +
               counts + "\n";
    }
    write_file_atomic(opt.out_dir / "rank.csv", csv);

    RunManifest manifest;
    manifest.command = "rank";
    manifest.arguments["out"] = opt.out_dir.string();
    for (std::size_t i = 0; i < opt.summary_files.size(); ++i) {
        manifest.arguments["summary" + std::to_string(i)] = opt.summary_files[i].string();
        manifest.add_input(opt.summary_files[i]);
    }
    manifest.stamp();
    manifest.write(opt.out_dir);
    return table;
}

// ---- report ----------------------------------------------------------------

struct ReportOptions {
    std::vector<std::filesystem::path> metrics_files;
    std::filesystem::path out_dir;
};

// Per-metric plot data: algorithm,k,value with k the mean generated count and
// value the mean metric at each swept K.
inline void run_report(const ReportOptions& opt) {
    namespace fs = std::filesystem;
    if (opt.metrics_files.empty()) throw std::runtime_error("report: no metrics files");

    static const std::vector<std::string> metric_names = {
        "rec", "ue_np", "ue_levin", "ue_bergh", "asa", "ev", "co", "icv", "mde"};
    // (algorithm, k_desired) -> accumulated sums
    struct Acc {
        double k_generated = 0;
        std::vector<double> metrics = std::vector<double>(9, 0.0);
        std::size_t n = 0;
    };
    std::map<std::pair<std::string, int>, Acc> acc;

    for (const auto& file : opt.metrics_files) {
        const auto rows = read_csv(file.string());
        if (rows.empty() || rows.front().empty() || rows.front()[0] != "dataset")
            throw std::runtime_error("report: malformed metrics file " + file.string());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 14)
                throw std::runtime_error("report: malformed row in " + file.string());
            if (r[4].empty()) continue;  // infeasible row
            auto& a = acc[{r[2], std::stoi(r[3])}];
            a.k_generated += std::stod(r[4]);
            for (int m = 0; m < 9; ++m) a.metrics[m] += std::stod(r[5 + m]);
            a.n++;
        }
    }

    fs::create_directories(opt.out_dir);
    for (int m = 0; m < 9; ++m) {
        std::string csv = "algorithm,k,value\n";
        for (const auto& [key, a] : acc)
            csv += key.first + ',' + format_fixed(a.k_generated / a.n, 2) + ',' +
                   format_fixed(a.metrics[m] / a.n, 6) + "\n";
        write_file_atomic(opt.out_dir / (metric_names[m] + ".csv"), csv);
    }

    RunManifest manifest;
    manifest.command = "report";
    manifest.arguments["out"] = opt.out_dir.string();
    for (std::size_t i = 0; i < opt.metrics_files.size(); ++i) {
        manifest.arguments["metrics" + std::to_string(i)] = opt.metrics_files[i].string();
        manifest.add_input(opt.metrics_files[i]);
    }
    manifest.stamp();
    manifest.write(opt.out_dir);
}

}  // namespace spix
