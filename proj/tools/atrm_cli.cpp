#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "atrm/checkpoint.hpp"
#include "atrm/dataset.hpp"
#include "atrm/image_io.hpp"
#include "atrm/manifest.hpp"
#include "atrm/metrics.hpp"
#include "atrm/pipeline.hpp"
#include "atrm/rng.hpp"
#include "atrm/trainer.hpp"
#include "atrm/turbulence.hpp"

namespace fs = std::filesystem;
using namespace atrm;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kNumericFailure = 3;

struct SimulateOptions {
    std::string clean_dir;
    std::string out_dir;
    int frames = 1;
    std::string config_file;
    std::uint64_t seed = 0;
};

struct TrainOptions {
    std::string data_dir;
    std::string preset = "desk";
    std::string out_path;
    int in_frames = 1;
    int avg_window = 1;
    std::uint64_t seed = 0;
    int epochs_override = 0;
    int holdout = 0;
    std::string resume_path;
    std::string loss_csv;
    bool quiet = false;
};

struct RestoreOptions {
    std::string model_path;
    std::string in_dir;
    std::string out_dir;
    int avg_window = 1;
    bool report = false;
};

struct EvaluateOptions {
    std::string restored_dir;
    std::string clean_path;
    std::string out_csv;
};

// Flat key=value distortion settings; '#' starts a comment.
DistortionConfig parse_distortion_config(const std::string& path, std::uint64_t seed) {
    std::map<std::string, std::string> kv;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw IoError(IoError::Kind::open_failed, "cannot open config " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ValueError("config " + path + ":" + std::to_string(lineno) +
                                 ": expected key=value");
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }

    auto take = [&kv](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    int psf_count = 9, psf_size = 15;
    if (auto v = take("psf_count")) psf_count = std::stoi(*v);
    if (auto v = take("psf_size")) psf_size = std::stoi(*v);

    DistortionConfig cfg;
    cfg.seed = seed;
    if (auto dir = take("psf_dir")) {
        cfg.psf_bank.clear();
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(*dir)) {
            if (e.is_regular_file() && e.path().extension() == ".psf") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) cfg.psf_bank.push_back(load_psf(f));
        if (cfg.psf_bank.empty()) throw ValueError("psf_dir " + *dir + " holds no .psf files");
    } else {
        cfg.psf_bank = generate_psf_bank(psf_count, psf_size, derive_seed(seed, 0x70736662616e6bULL));
    }
    if (auto v = take("tile_rows")) cfg.tile_rows = std::stoi(*v);
    if (auto v = take("tile_cols")) cfg.tile_cols = std::stoi(*v);
    if (auto v = take("scale_min")) cfg.scale_min = std::stod(*v);
    if (auto v = take("scale_max")) cfg.scale_max = std::stod(*v);
    if (auto v = take("noise_sigma")) cfg.noise_sigma = std::stod(*v);
    if (auto v = take("blend_margin")) cfg.blend_margin = std::stoi(*v);
    if (!kv.empty()) throw ValueError("unknown config key '" + kv.begin()->first + "'");
    cfg.validate();
    return cfg;
}

nlohmann::json distortion_json(const DistortionConfig& cfg) {
    return {{"psf_count", cfg.psf_bank.size()},
            {"psf_size", cfg.psf_bank.empty() ? 0 : cfg.psf_bank[0].size},
            {"tile_rows", cfg.tile_rows},
            {"tile_cols", cfg.tile_cols},
            {"scale_min", cfg.scale_min},
            {"scale_max", cfg.scale_max},
            {"noise_sigma", cfg.noise_sigma},
            {"blend_margin", cfg.blend_margin}};
}

int run_simulate(const SimulateOptions& opt) {
    if (opt.frames < 1) throw ValueError("--frames must be >= 1");
    DistortionConfig base = parse_distortion_config(opt.config_file, opt.seed);

    const auto clean_files = list_images(opt.clean_dir);
    if (clean_files.empty()) {
        throw IoError(IoError::Kind::open_failed, "no images in " + opt.clean_dir);
    }
    fs::create_directories(opt.out_dir);

    RunManifest manifest("simulate", opt.seed);
    manifest.set_config("frames", opt.frames);
    manifest.set_config("distortion", distortion_json(base));
    if (!opt.config_file.empty()) manifest.add_input(opt.config_file);

    for (std::size_t i = 0; i < clean_files.size(); ++i) {
        const fs::path& file = clean_files[i];
        manifest.add_input(file);
        const ImageFrame clean = read_image(file);

        DistortionConfig cfg = base;
        cfg.seed = derive_seed(opt.seed, i);
        const FrameSequence frames = simulate_sequence(clean, opt.frames, cfg);

        const std::string scene = file.stem().string();
        save_scene(opt.out_dir, scene, &clean, frames);
        manifest.add_output((fs::path(opt.out_dir) / scene).string());
        std::cout << "simulated " << scene << ": " << frames.size() << " frame(s)\n";
    }
    manifest.write(fs::path(opt.out_dir) / "manifest.json");
    return 0;
}

int run_train(const TrainOptions& opt) {
    if (opt.preset != "desk" && opt.preset != "paper") {
        throw ValueError("--preset must be 'desk' or 'paper'");
    }
    InputMode mode{opt.in_frames, opt.avg_window};
    mode.validate();

    const auto scenes = load_dataset(opt.data_dir);
    const auto examples = build_training_examples(scenes, mode, opt.holdout);

    TrainingConfig tcfg = opt.preset == "desk" ? TrainingConfig::desk() : TrainingConfig::paper();
    tcfg.seed = opt.seed;
    if (opt.epochs_override > 0) tcfg.epochs = opt.epochs_override;
    if (opt.in_frames == 3) tcfg.resize_augment = {{0.7, 1.0}};

    Model<float> model;
    AdamState<float> adam;
    if (!opt.resume_path.empty()) {
        Checkpoint ck = load_checkpoint(opt.resume_path);
        if (ck.model.config().in_channels != opt.in_frames) {
            throw ValueError("resume checkpoint expects in_channels " +
                             std::to_string(ck.model.config().in_channels));
        }
        model = std::move(ck.model);
        adam = ck.adam ? std::move(*ck.adam) : AdamState<float>::for_model(model);
    } else {
        const NetworkConfig ncfg =
            opt.preset == "desk" ? desk_network(opt.in_frames) : paper_network(opt.in_frames);
        model = Model<float>::init(ncfg, opt.seed);
        adam = AdamState<float>::for_model(model);
    }

    RunManifest manifest("train", opt.seed);
    manifest.set_config("preset", opt.preset);
    manifest.set_config("in_frames", opt.in_frames);
    manifest.set_config("avg_window", opt.avg_window);
    manifest.set_config("holdout", opt.holdout);
    manifest.set_config("epochs", tcfg.epochs);
    manifest.set_config("batch_size", tcfg.batch_size);
    manifest.set_config("patch_size", tcfg.patch_size);
    manifest.set_config("network", {{"depth", model.config().depth},
                                    {"kernel", model.config().kernel},
                                    {"width", model.config().width},
                                    {"in_channels", model.config().in_channels}});
    for (const auto& scene : scenes) {
        manifest.add_input(fs::path(opt.data_dir) / scene.name / "clean.pgm");
    }

    int last_epoch = -1;
    auto progress = [&](const LossRow& row) {
        if (!opt.quiet && row.epoch != last_epoch) {
            std::cout << "epoch " << row.epoch << " lr " << row.lr << " loss " << row.loss << "\n";
            last_epoch = row.epoch;
        }
        return true;
    };
    const TrainReport report = train(model, examples, tcfg, adam, progress);

    save_checkpoint(model, &adam, opt.out_path);
    manifest.add_output(opt.out_path);

    const std::string csv = opt.loss_csv.empty() ? opt.out_path + ".loss.csv" : opt.loss_csv;
    write_loss_csv(report.trace, csv);
    manifest.add_output(csv);
    manifest.write(opt.out_path + ".manifest.json");

    if (!report.trace.empty()) {
        std::cout << "trained " << report.trace.size() << " steps; final loss "
                  << report.trace.back().loss << "\n";
    }
    return 0;
}

int run_restore(const RestoreOptions& opt) {
    Checkpoint ck = load_checkpoint(opt.model_path);
    const Model<float>& model = ck.model;

    FrameSequence frames;
    for (const fs::path& f : list_images(opt.in_dir)) {
        if (f.stem().string() == "clean") continue;  // allow pointing at a scene directory
        frames.push_back(read_image(f));
    }
    if (frames.empty()) {
        throw IoError(IoError::Kind::open_failed, "no input frames in " + opt.in_dir);
    }

    InputMode mode{model.config().in_channels, opt.avg_window};
    const RestoreResult result = restore_sequence(model, frames, mode);

    fs::create_directories(opt.out_dir);
    RunManifest manifest("restore", 0);
    manifest.set_config("avg_window", opt.avg_window);
    manifest.set_config("in_frames", model.config().in_channels);
    manifest.add_input(opt.model_path);

    for (const RestoredFrame& rf : result.frames) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "restored_%04d.pgm", rf.index + 1);
        const fs::path out = fs::path(opt.out_dir) / buf;
        write_image(rf.image, out);
        manifest.add_output(out);
    }
    if (opt.report) {
        manifest.set_throughput(result.pixels_per_second(), result.pixels, result.seconds);
        std::cout << "throughput: " << result.pixels_per_second() << " px/s (" << result.pixels
                  << " px in " << result.seconds << " s)\n";
    }
    manifest.write(fs::path(opt.out_dir) / "manifest.json");
    std::cout << "restored " << result.frames.size() << " frame(s)\n";
    return 0;
}

int run_evaluate(const EvaluateOptions& opt) {
    FrameSequence restored;
    for (const fs::path& f : list_images(opt.restored_dir)) restored.push_back(read_image(f));
    if (restored.empty()) {
        throw IoError(IoError::Kind::open_failed, "no frames in " + opt.restored_dir);
    }
    const ImageFrame clean = read_image(opt.clean_path);
    const SceneEvaluation eval = evaluate_scene(restored, clean);
    write_report_csv(eval, opt.out_csv);
    std::cout << "mean psnr " << eval.mean.psnr_db << " dB, mean ssim " << eval.mean.ssim << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atmospheric turbulence restoration pipeline"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate", "synthesize distorted sequences from clean images");
    sim_cmd->add_option("--clean", sim.clean_dir, "directory of clean images")->required();
    sim_cmd->add_option("--out", sim.out_dir, "output dataset directory")->required();
    sim_cmd->add_option("--frames", sim.frames, "frames per scene")->required();
    sim_cmd->add_option("--config", sim.config_file, "key=value distortion settings");
    sim_cmd->add_option("--seed", sim.seed, "base seed");

    TrainOptions tr;
    auto* train_cmd = app.add_subcommand("train", "train a restoration model on a dataset");
    train_cmd->add_option("--data", tr.data_dir, "dataset directory (simulate layout)")->required();
    train_cmd->add_option("--preset", tr.preset, "desk|paper")->required();
    train_cmd->add_option("--out", tr.out_path, "output checkpoint path")->required();
    train_cmd->add_option("--in-frames", tr.in_frames, "1 or 3 input frames");
    train_cmd->add_option("--avg-window", tr.avg_window, "temporal averaging window");
    train_cmd->add_option("--seed", tr.seed, "training seed");
    train_cmd->add_option("--epochs", tr.epochs_override, "override the preset epoch count");
    train_cmd->add_option("--holdout", tr.holdout, "frames per scene excluded from training");
    train_cmd->add_option("--resume", tr.resume_path, "resume from a checkpoint");
    train_cmd->add_option("--loss-csv", tr.loss_csv, "loss trace path (default <out>.loss.csv)");
    train_cmd->add_flag("--quiet", tr.quiet, "suppress per-epoch progress");

    RestoreOptions re;
    auto* restore_cmd = app.add_subcommand("restore", "restore distorted frames with a model");
    restore_cmd->add_option("--model", re.model_path, "checkpoint path")->required();
    restore_cmd->add_option("--in", re.in_dir, "directory of distorted frames")->required();
    restore_cmd->add_option("--out", re.out_dir, "output directory")->required();
    restore_cmd->add_option("--avg-window", re.avg_window, "temporal averaging window");
    restore_cmd->add_flag("--report", re.report, "record throughput in the manifest");

    EvaluateOptions ev;
    auto* eval_cmd = app.add_subcommand("evaluate", "score restored frames against a clean image");
    eval_cmd->add_option("--restored", ev.restored_dir, "directory of restored frames")->required();
    eval_cmd->add_option("--clean", ev.clean_path, "clean reference image")->required();
    eval_cmd->add_option("--out", ev.out_csv, "report CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sim_cmd) return run_simulate(sim);
        if (*train_cmd) return run_train(tr);
        if (*restore_cmd) return run_restore(re);
        if (*eval_cmd) return run_evaluate(ev);
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericFailure;
    } catch (const ValueError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return 0;
}
