// rfcount: people counting from RSSI traces.
//
// Pipeline subcommands compose through CSV artifacts:
//   synth -> trace.csv + truth.csv
//   detect -> decisions_<rx>.csv + events_<rx>.csv   (per receiver)
//   fuse -> pairs.csv
//   features -> features.csv                         (labeled when truth given)
//   train -> model.txt + train_report.txt
//   classify -> predictions.csv
//   count -> report.txt / report.jsonl / counted_events.csv (end-to-end)
//   sweep -> sweep.csv                               (window-size error study)

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfcount/detect.hpp"
#include "rfcount/errors.hpp"
#include "rfcount/features.hpp"
#include "rfcount/lda.hpp"
#include "rfcount/pipeline.hpp"
#include "rfcount/synth.hpp"
#include "rfcount/trace.hpp"

namespace fs = std::filesystem;

namespace {

fs::path resolve_out(const std::string& output_dir, const std::string& name) {
    fs::path p(name);
    if (p.is_absolute()) return p;
    return fs::path(output_dir) / p;
}

void add_output_dir(CLI::App* cmd, std::string& output_dir) {
    cmd->add_option("-O,--output-dir", output_dir,
                    "Directory for relative output paths (created if missing)")
        ->capture_default_str();
}

struct DetectorFlags {
    std::string method = "std";
    std::size_t window = 10;
    double prob_threshold = 0.3;
    double std_threshold = 2.0;
    std::size_t min_duration = 3;
    std::size_t merge_gap = 2;

    void add(CLI::App* cmd) {
        cmd->add_option("--method", method, "Detector: prob (probability-in-band) or std")
            ->check(CLI::IsMember({"prob", "std"}))
            ->capture_default_str();
        cmd->add_option("--window", window, "Sliding window size (samples)")
            ->capture_default_str();
        cmd->add_option("--prob-threshold", prob_threshold,
                        "Movement when P(fluctuation in [-1,1]) falls below this")
            ->capture_default_str();
        cmd->add_option("--std-threshold", std_threshold,
                        "Movement when window std exceeds this (dB)")
            ->capture_default_str();
        cmd->add_option("--min-duration", min_duration, "Drop events shorter than this (samples)")
            ->capture_default_str();
        cmd->add_option("--merge-gap", merge_gap,
                        "Merge events separated by at most this many negatives")
            ->capture_default_str();
    }

    rfcount::DetectorConfig to_config(std::size_t pairing_window = 30) const {
        rfcount::DetectorConfig cfg;
        cfg.method = rfcount::detector_method_from_string(method);
        cfg.window = window;
        cfg.prob_threshold = prob_threshold;
        cfg.std_threshold = std_threshold;
        cfg.min_duration = min_duration;
        cfg.merge_gap = merge_gap;
        cfg.pairing_window = pairing_window;
        return cfg;
    }
};

void write_out(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    rfcount::write_text_file(path, content);
}

std::string format_train_report(const rfcount::lda::Model& model,
                                const std::vector<rfcount::lda::UnivariateStats>& tests) {
    using rfcount::kFeatureNames;
    std::string out;
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    out += "groups:";
    for (std::size_t i = 0; i < model.group_labels.size(); ++i)
        out += " " + std::to_string(model.group_labels[i]) + "(n=" +
               std::to_string(model.group_counts[i]) + ")";
    out += "\nvariables: " + std::to_string(model.p) + "\n";
    out += "resubstitution accuracy: " + num(model.resubstitution_accuracy) + "\n";
    if (model.regularization > 0.0)
        out += "ridge regularization: " + num(model.regularization) + "\n";

    out += "\ntests of equality of group means (wilks_lambda, F, p):\n";
    for (std::size_t j = 0; j < tests.size(); ++j) {
        std::string name = j < kFeatureNames.size() ? std::string(kFeatureNames[j])
                                                    : "var" + std::to_string(j);
        out += "  " + name + ": " + num(tests[j].wilks_lambda) + ", " + num(tests[j].f_stat) +
               ", " + num(tests[j].p_value) + "\n";
    }

    out += "\ndiscriminant functions (eigenvalue, % variance, canonical correlation):\n";
    for (std::size_t k = 0; k < model.n_functions(); ++k) {
        auto ki = static_cast<Eigen::Index>(k);
        out += "  F" + std::to_string(k + 1) + ": " + num(model.eigenvalues(ki)) + ", " +
               num(model.variance_pct(ki)) + ", " + num(model.canonical_correlations(ki)) + "\n";
    }

    out += "\nunstandardized coefficients (one row per function, constant last):\n";
    for (std::size_t k = 0; k < model.n_functions(); ++k) {
        auto ki = static_cast<Eigen::Index>(k);
        out += "  F" + std::to_string(k + 1) + ":";
        for (Eigen::Index j = 0; j < model.coefficients.cols(); ++j)
            out += " " + num(model.coefficients(ki, j));
        out += " | " + num(model.constants(ki)) + "\n";
    }

    out += "\ngroup centroids in discriminant space:\n";
    for (std::size_t i = 0; i < model.n_groups(); ++i) {
        out += "  group " + std::to_string(model.group_labels[i]) + ":";
        for (Eigen::Index k = 0; k < model.centroids.cols(); ++k)
            out += " " + num(model.centroids(static_cast<Eigen::Index>(i), k));
        out += "\n";
    }

    out += "\nstructure matrix (loadings; * marks |r| >= 0.3):\n";
    for (Eigen::Index j = 0; j < model.structure.rows(); ++j) {
        std::string name = static_cast<std::size_t>(j) < kFeatureNames.size()
                               ? std::string(kFeatureNames[static_cast<std::size_t>(j)])
                               : "var" + std::to_string(j);
        out += "  " + name + ":";
        for (Eigen::Index k = 0; k < model.structure.cols(); ++k) {
            out += " " + num(model.structure(j, k));
            if (std::abs(model.structure(j, k)) >= 0.3) out += "*";
        }
        out += "\n";
    }

    if (!model.warnings.empty()) {
        out += "\nwarnings:\n";
        for (const std::string& w : model.warnings) out += "  " + w + "\n";
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"People counting from wireless RSSI traces"};
    app.require_subcommand(1);

    // --- synth ---------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic RSSI trace");
    struct {
        std::string output_dir = ".";
        std::string scenario_path;
        std::vector<int> groups;
        std::string trace_out = "trace.csv";
        std::string truth_out = "truth.csv";
        std::string scenario_out;
        rfcount::SynthConfig cfg;
        std::int64_t first_start = 50;
        std::int64_t spacing = 100;
        std::uint64_t n_samples = 0;  // 0 = size automatically
    } sy;
    add_output_dir(synth, sy.output_dir);
    auto* sy_scenario = synth->add_option("--scenario", sy.scenario_path,
                                          "Scenario CSV (start_sample,group_size,delay_r2,"
                                          "duration_r1,duration_r2)")
                            ->check(CLI::ExistingFile);
    synth->add_option("--groups", sy.groups,
                      "Comma-separated group sizes; one evenly spaced crossing each")
        ->delimiter(',')
        ->excludes(sy_scenario);
    synth->add_option("--n-samples", sy.n_samples, "Trace length in samples (0 = auto)")
        ->capture_default_str();
    synth->add_option("--baseline", sy.cfg.baseline_rssi_dbm, "Baseline RSSI (dBm)")
        ->capture_default_str();
    synth->add_option("--quiet-sigma", sy.cfg.quiet_sigma, "Fluctuation std with no movement (dB)")
        ->capture_default_str();
    synth->add_option("--active-sigma", sy.cfg.active_sigma_base,
                      "Fluctuation std for one person (dB)")
        ->capture_default_str();
    synth->add_option("--sigma-per-person", sy.cfg.sigma_per_person,
                      "Extra fluctuation std per additional person (dB)")
        ->capture_default_str();
    synth->add_option("--duration-base", sy.cfg.duration_base, "Event duration for one person")
        ->capture_default_str();
    synth->add_option("--duration-per-person", sy.cfg.duration_per_person,
                      "Extra duration per additional person")
        ->capture_default_str();
    synth->add_option("--r2-extra", sy.cfg.r2_extra_duration,
                      "Extra duration on the far (receiver 2) link")
        ->capture_default_str();
    synth->add_option("--mean-reversion", sy.cfg.mean_reversion,
                      "Baseline pull of the RSSI walk, in [0,1)")
        ->capture_default_str();
    synth->add_option("--interval-ms", sy.cfg.interval_ms, "Inter-packet interval (ms)")
        ->capture_default_str();
    synth->add_option("--seed", sy.cfg.rng_seed, "RNG seed")->capture_default_str();
    synth->add_option("--first-start", sy.first_start, "Start of the first crossing")
        ->capture_default_str();
    synth->add_option("--spacing", sy.spacing, "Samples between crossing starts")
        ->capture_default_str();
    synth->add_option("--r1-id", sy.cfg.receiver1_id, "Near receiver id")->capture_default_str();
    synth->add_option("--r2-id", sy.cfg.receiver2_id, "Far receiver id")->capture_default_str();
    synth->add_option("--trace", sy.trace_out, "Trace output path")->capture_default_str();
    synth->add_option("--truth", sy.truth_out, "Ground-truth output path")->capture_default_str();
    synth->add_option("--scenario-out", sy.scenario_out, "Also write the scenario CSV here");
    synth->callback([&] {
        std::vector<rfcount::CrossingEvent> events;
        if (!sy.scenario_path.empty())
            events = rfcount::read_scenario(sy.scenario_path);
        else
            events = rfcount::make_scenario(sy.cfg, sy.groups, sy.first_start, sy.spacing);

        if (sy.n_samples != 0) {
            sy.cfg.n_samples = sy.n_samples;
        } else {
            std::int64_t max_end = 0;
            for (const auto& ev : events) {
                max_end = std::max(max_end, ev.start_sample + ev.duration_r1);
                max_end = std::max(max_end, ev.start_sample + ev.delay_r2 + ev.duration_r2);
            }
            sy.cfg.n_samples = static_cast<std::size_t>(max_end) + 51;
        }

        rfcount::SynthResult result = rfcount::generate_trace(sy.cfg, events);
        write_out(resolve_out(sy.output_dir, sy.trace_out), rfcount::serialize_trace(result.trace));
        write_out(resolve_out(sy.output_dir, sy.truth_out),
                  rfcount::serialize_ground_truth(result.truth));
        if (!sy.scenario_out.empty())
            write_out(resolve_out(sy.output_dir, sy.scenario_out),
                      rfcount::serialize_scenario(events));
        std::cout << "wrote " << result.trace.total_samples() << " samples, "
                  << result.truth.events.size() << " events, head count "
                  << result.truth.head_count() << "\n";
    });

    // --- detect --------------------------------------------------------
    auto* det = app.add_subcommand("detect", "Run movement detection on one receiver");
    struct {
        std::string output_dir = ".";
        std::string trace_path;
        std::string receiver;
        std::string decisions_out;
        std::string events_out;
        DetectorFlags flags;
    } de;
    add_output_dir(det, de.output_dir);
    det->add_option("--trace", de.trace_path, "Input trace CSV")
        ->required()
        ->check(CLI::ExistingFile);
    det->add_option("--receiver", de.receiver, "Receiver id (default: first in trace)");
    de.flags.add(det);
    det->add_option("--decisions", de.decisions_out,
                    "Decision CSV output (default decisions_<rx>.csv)");
    det->add_option("--events", de.events_out, "Event CSV output (default events_<rx>.csv)");
    det->callback([&] {
        rfcount::Trace trace = rfcount::read_trace(de.trace_path);
        const rfcount::ReceiverStream& stream =
            de.receiver.empty() ? trace.receivers().front() : trace.at(de.receiver);
        rfcount::DetectorConfig cfg = de.flags.to_config();
        auto stats = rfcount::window_stats(rfcount::fluctuations(stream), cfg.window);
        auto decisions =
            rfcount::detect(stats, cfg.method, cfg.prob_threshold, cfg.std_threshold);
        auto events = rfcount::segment_events(stats, decisions, cfg.method, stream.receiver_id,
                                              cfg.min_duration, cfg.merge_gap);

        std::string dec_name = de.decisions_out.empty()
                                   ? "decisions_" + stream.receiver_id + ".csv"
                                   : de.decisions_out;
        std::string ev_name =
            de.events_out.empty() ? "events_" + stream.receiver_id + ".csv" : de.events_out;
        write_out(resolve_out(de.output_dir, dec_name),
                  rfcount::serialize_decisions(stats, decisions));
        write_out(resolve_out(de.output_dir, ev_name), rfcount::serialize_events(events));

        std::size_t positives = 0;
        for (bool d : decisions) positives += d ? 1 : 0;
        std::cout << "receiver " << stream.receiver_id << ": " << events.size() << " events, "
                  << positives << "/" << decisions.size() << " movement-positive windows\n";
    });

    // --- fuse ----------------------------------------------------------
    auto* fuse = app.add_subcommand("fuse", "Pair events across two receivers");
    struct {
        std::string output_dir = ".";
        std::string events_a;
        std::string events_b;
        std::string pairs_out = "pairs.csv";
        std::string discarded_a_out;
        std::string discarded_b_out;
        std::size_t pairing_window = 30;
    } fu;
    add_output_dir(fuse, fu.output_dir);
    fuse->add_option("--events-a", fu.events_a, "Near receiver event CSV")
        ->required()
        ->check(CLI::ExistingFile);
    fuse->add_option("--events-b", fu.events_b, "Far receiver event CSV")
        ->required()
        ->check(CLI::ExistingFile);
    fuse->add_option("--pairing-window", fu.pairing_window,
                     "Maximum start-index distance for non-overlapping pairs")
        ->capture_default_str();
    fuse->add_option("--pairs", fu.pairs_out, "Paired-event CSV output")->capture_default_str();
    fuse->add_option("--discarded-a", fu.discarded_a_out, "Write discarded near events here");
    fuse->add_option("--discarded-b", fu.discarded_b_out, "Write discarded far events here");
    fuse->callback([&] {
        auto events_a = rfcount::parse_events(rfcount::read_text_file(fu.events_a));
        auto events_b = rfcount::parse_events(rfcount::read_text_file(fu.events_b));
        rfcount::FusionResult result =
            rfcount::fuse_receivers(std::move(events_a), std::move(events_b), fu.pairing_window);
        write_out(resolve_out(fu.output_dir, fu.pairs_out),
                  rfcount::serialize_pairs(result.pairs));
        if (!fu.discarded_a_out.empty())
            write_out(resolve_out(fu.output_dir, fu.discarded_a_out),
                      rfcount::serialize_events(result.discarded_a));
        if (!fu.discarded_b_out.empty())
            write_out(resolve_out(fu.output_dir, fu.discarded_b_out),
                      rfcount::serialize_events(result.discarded_b));
        std::cout << result.pairs.size() << " pairs, discarded " << result.discarded_a.size()
                  << " near + " << result.discarded_b.size() << " far false positives\n";
    });

    // --- features ------------------------------------------------------
    auto* feat = app.add_subcommand("features", "Extract feature vectors from paired events");
    struct {
        std::string output_dir = ".";
        std::string pairs_path;
        std::string decisions_a;
        std::string decisions_b;
        std::string truth_path;
        std::string out = "features.csv";
    } fe;
    add_output_dir(feat, fe.output_dir);
    feat->add_option("--pairs", fe.pairs_path, "Paired-event CSV")
        ->required()
        ->check(CLI::ExistingFile);
    feat->add_option("--decisions-a", fe.decisions_a, "Near receiver decision CSV")
        ->required()
        ->check(CLI::ExistingFile);
    feat->add_option("--decisions-b", fe.decisions_b, "Far receiver decision CSV")
        ->required()
        ->check(CLI::ExistingFile);
    feat->add_option("--truth", fe.truth_path, "Label vectors from this ground-truth CSV")
        ->check(CLI::ExistingFile);
    feat->add_option("--out", fe.out, "Feature CSV output")->capture_default_str();
    feat->callback([&] {
        auto pairs = rfcount::parse_pairs(rfcount::read_text_file(fe.pairs_path));
        auto dec_a = rfcount::parse_decisions(rfcount::read_text_file(fe.decisions_a));
        auto dec_b = rfcount::parse_decisions(rfcount::read_text_file(fe.decisions_b));
        std::vector<rfcount::EventFeatureVector> features;
        for (rfcount::PairedEvent& pair : pairs) {
            rfcount::attach_stats_slice(pair.a, dec_a.stats);
            rfcount::attach_stats_slice(pair.b, dec_b.stats);
            features.push_back(rfcount::extract_features(pair));
        }
        if (!fe.truth_path.empty()) {
            rfcount::GroundTruth truth = rfcount::read_ground_truth(fe.truth_path);
            rfcount::label_features(features, pairs, truth);
        }
        write_out(resolve_out(fe.output_dir, fe.out), rfcount::serialize_features(features));
        std::size_t labeled = 0;
        for (const auto& f : features) labeled += f.label ? 1 : 0;
        std::cout << features.size() << " feature vectors (" << labeled << " labeled)\n";
    });

    // --- train ---------------------------------------------------------
    auto* train = app.add_subcommand("train", "Fit the group-size discriminant model");
    struct {
        std::string output_dir = ".";
        std::string features_path;
        std::string model_out = "model.txt";
        std::string report_out = "train_report.txt";
    } tr;
    add_output_dir(train, tr.output_dir);
    train->add_option("--features", tr.features_path, "Labeled feature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    train->add_option("--model", tr.model_out, "Model file output")->capture_default_str();
    train->add_option("--report", tr.report_out, "Training report output")->capture_default_str();
    train->callback([&] {
        auto dataset = rfcount::parse_features(rfcount::read_text_file(tr.features_path));
        std::vector<rfcount::EventFeatureVector> labeled;
        for (const auto& v : dataset)
            if (v.label) labeled.push_back(v);
        if (labeled.empty()) throw rfcount::EmptyInputError("no labeled feature vectors");

        auto [X, labels] = rfcount::lda::to_matrix(labeled);
        rfcount::lda::Model model = rfcount::lda::fit(X, labels);
        auto tests = rfcount::lda::univariate_table(X, labels);

        rfcount::lda::save_model(model, resolve_out(tr.output_dir, tr.model_out));
        write_out(resolve_out(tr.output_dir, tr.report_out), format_train_report(model, tests));
        std::cout << "trained on " << labeled.size() << " samples, "
                  << model.n_groups() << " groups; resubstitution accuracy "
                  << model.resubstitution_accuracy << "\n";
        for (const std::string& w : model.warnings) std::cout << "warning: " << w << "\n";
    });

    // --- classify ------------------------------------------------------
    auto* cls = app.add_subcommand("classify", "Predict group sizes for feature vectors");
    struct {
        std::string output_dir = ".";
        std::string model_path;
        std::string features_path;
        std::string out = "predictions.csv";
        bool allow_any_dims = false;
    } cl;
    add_output_dir(cls, cl.output_dir);
    cls->add_option("--model", cl.model_path, "Model file")->required()->check(CLI::ExistingFile);
    cls->add_option("--features", cl.features_path, "Feature CSV")
        ->required()
        ->check(CLI::ExistingFile);
    cls->add_option("--out", cl.out, "Prediction CSV output")->capture_default_str();
    cls->add_flag("--allow-any-dims", cl.allow_any_dims,
                  "Accept models that are not the canonical 10-variable 5-group shape");
    cls->callback([&] {
        rfcount::lda::Model model = rfcount::lda::load_model(cl.model_path, cl.allow_any_dims);
        auto dataset = rfcount::parse_features(rfcount::read_text_file(cl.features_path));
        std::string out = "index,predicted_group,label\n";
        std::size_t labeled = 0, correct = 0;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            int predicted = rfcount::lda::classify(model, dataset[i]);
            out += std::to_string(i) + "," + std::to_string(predicted) + ",";
            if (dataset[i].label) {
                out += std::to_string(*dataset[i].label);
                ++labeled;
                if (*dataset[i].label == predicted) ++correct;
            }
            out += "\n";
        }
        write_out(resolve_out(cl.output_dir, cl.out), out);
        std::cout << dataset.size() << " predictions";
        if (labeled > 0)
            std::cout << "; accuracy on labeled rows "
                      << static_cast<double>(correct) / static_cast<double>(labeled) << " ("
                      << correct << "/" << labeled << ")";
        std::cout << "\n";
    });

    // --- count ---------------------------------------------------------
    auto* count = app.add_subcommand("count", "End-to-end counting on a trace");
    struct {
        std::string output_dir = ".";
        std::string trace_path;
        std::string model_path;
        std::string model2_path;
        std::vector<std::string> receivers;
        std::string truth_path;
        std::uint64_t period_samples = 0;
        std::size_t pairing_window = 30;
        bool allow_any_dims = false;
        std::string text_out = "report.txt";
        std::string jsonl_out = "report.jsonl";
        std::string events_out = "counted_events.csv";
        DetectorFlags flags;
    } co;
    add_output_dir(count, co.output_dir);
    count->add_option("--trace", co.trace_path, "Input trace CSV")
        ->required()
        ->check(CLI::ExistingFile);
    count->add_option("--model", co.model_path, "Model file")
        ->required()
        ->check(CLI::ExistingFile);
    count->add_option("--model2", co.model2_path, "Model for the second receiver pair (3-Rx)")
        ->check(CLI::ExistingFile);
    count->add_option("--receivers", co.receivers,
                      "Receiver ids near-to-far (2 or 3; default: all in trace)")
        ->delimiter(',');
    co.flags.add(count);
    count->add_option("--pairing-window", co.pairing_window,
                      "Maximum start-index distance for non-overlapping pairs")
        ->capture_default_str();
    count->add_option("--truth", co.truth_path, "Evaluate against this ground-truth CSV")
        ->check(CLI::ExistingFile);
    count->add_option("--period-samples", co.period_samples,
                      "Annotate events with analysis periods of this length");
    count->add_flag("--allow-any-dims", co.allow_any_dims,
                    "Accept models that are not the canonical 10-variable 5-group shape");
    count->add_option("--report-text", co.text_out, "Text report output")->capture_default_str();
    count->add_option("--report-jsonl", co.jsonl_out, "JSON-lines report output")
        ->capture_default_str();
    count->add_option("--events-out", co.events_out, "Counted-event CSV output")
        ->capture_default_str();
    count->callback([&] {
        rfcount::Trace trace = rfcount::read_trace(co.trace_path);
        rfcount::lda::Model model = rfcount::lda::load_model(co.model_path, co.allow_any_dims);
        std::vector<const rfcount::lda::Model*> models{&model};
        rfcount::lda::Model model2;
        if (!co.model2_path.empty()) {
            model2 = rfcount::lda::load_model(co.model2_path, co.allow_any_dims);
            models.push_back(&model2);
        }

        rfcount::CountConfig cfg;
        cfg.detector = co.flags.to_config(co.pairing_window);
        cfg.receivers = co.receivers;
        if (co.period_samples > 0) cfg.period_samples = co.period_samples;

        rfcount::CountReport report = rfcount::run_count(trace, models, cfg);
        if (!co.truth_path.empty())
            rfcount::evaluate_report(report, rfcount::read_ground_truth(co.truth_path));

        std::string text = rfcount::format_report_text(report);
        write_out(resolve_out(co.output_dir, co.text_out), text);
        write_out(resolve_out(co.output_dir, co.jsonl_out),
                  rfcount::serialize_report_jsonl(report));
        write_out(resolve_out(co.output_dir, co.events_out),
                  rfcount::serialize_counted_events(report.pairs[report.combined_index]));
        std::cout << text;
    });

    // --- sweep ---------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "Window-size error-rate study on a labeled trace");
    struct {
        std::string output_dir = ".";
        std::string trace_path;
        std::string truth_path;
        std::vector<std::size_t> windows = {2, 4, 6, 8, 10, 12, 14, 16, 20, 30};
        std::string out = "sweep.csv";
        DetectorFlags flags;
    } sw;
    add_output_dir(sweep, sw.output_dir);
    sweep->add_option("--trace", sw.trace_path, "Input trace CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--truth", sw.truth_path, "Ground-truth CSV")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--windows", sw.windows, "Window sizes to evaluate")
        ->delimiter(',')
        ->capture_default_str();
    sw.flags.add(sweep);
    sweep->add_option("--out", sw.out, "Sweep CSV output")->capture_default_str();
    sweep->callback([&] {
        rfcount::Trace trace = rfcount::read_trace(sw.trace_path);
        rfcount::GroundTruth truth = rfcount::read_ground_truth(sw.truth_path);
        rfcount::DetectorConfig cfg = sw.flags.to_config();
        auto results = rfcount::window_sweep(trace, truth, sw.windows, cfg.method,
                                             cfg.prob_threshold, cfg.std_threshold);

        std::string csv = "n,errors,evaluated,error_rate\n";
        for (const rfcount::SweepResult& r : results) {
            csv += std::to_string(r.n) + "," + std::to_string(r.errors) + "," +
                   std::to_string(r.evaluated) + "," + std::to_string(r.error_rate) + "\n";
            std::cout << "n=" << r.n << ": error rate " << r.error_rate << " (" << r.errors << "/"
                      << r.evaluated << ")\n";
        }
        write_out(resolve_out(sw.output_dir, sw.out), csv);
        std::cout << "best window: n=" << rfcount::best_window(results) << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "rfcount: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
