#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "defect_cert/certify.hpp"
#include "defect_cert/errors.hpp"
#include "defect_cert/io.hpp"
#include "defect_cert/prony.hpp"
#include "defect_cert/rank_cert.hpp"
#include "defect_cert/signal.hpp"
#include "defect_cert/synth.hpp"

namespace dcert::cli {

namespace {

enum class Mode { exact, floating, modular };

/// Everything a subcommand may read. Populated from --config, then overridden by flags.
struct RunConfig {
    std::size_t d = 0;
    std::size_t W = 0;
    std::size_t K = 0;
    Mode mode = Mode::floating;
    std::uint64_t prime = kDefaultPrime;
    double noise_eps = 0.0;
    double eps0 = 1e-2;
    std::uint64_t seed = 0;
    std::map<std::string, double> thresholds;
    std::string input;
    std::string output;
};

class Logger {
public:
    explicit Logger(std::ostream& err) : err_(err) {
        if (const char* env = std::getenv("DEFECT_CERT_LOG")) {
            const std::string v = env;
            if (v == "quiet" || v == "0") level_ = 0;
            else if (v == "debug" || v == "2") level_ = 2;
        }
    }
    void info(const std::string& msg) const {
        if (level_ >= 1) err_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ >= 2) err_ << "[debug] " << msg << '\n';
    }

private:
    std::ostream& err_;
    int level_ = 1;
};

Mode parse_mode(const std::string& s) {
    if (s == "exact") return Mode::exact;
    if (s == "float") return Mode::floating;
    if (s == "modular") return Mode::modular;
    throw ArgumentError("unknown mode '" + s + "' (expected exact|float|modular)");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const auto& item : split_list(s)) {
        const Int128 v = parse_int128(item);
        if (v > INT64_MAX || v < INT64_MIN) throw ArgumentError("integer parameter out of 64-bit range");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& s) {
    return parse_sequence(s);
}

void emit(const std::string& payload, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << payload;
        if (!payload.empty() && payload.back() != '\n') out << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write '" + path + "'");
    f << payload;
    if (!payload.empty() && payload.back() != '\n') f << '\n';
}

bool wants_csv(const std::string& format, const std::string& path) {
    if (format == "csv") return true;
    if (format == "json") return false;
    return path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
}

void apply_config_file(const std::string& path, RunConfig& cfg, const CLI::App& app) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ArgumentError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ArgumentError("config must be a JSON object");
    // Flags given explicitly on the command line win over the config file.
    auto given = [&app](const std::string& name) {
        for (const CLI::App* sub : app.get_subcommands()) {
            const CLI::Option* o = sub->get_option_no_throw(name);
            if (o != nullptr && o->count() > 0) return true;
        }
        const CLI::Option* o = app.get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    if (j.contains("d") && !given("--d")) cfg.d = j["d"].get<std::size_t>();
    if (j.contains("W") && !given("--W")) cfg.W = j["W"].get<std::size_t>();
    if (j.contains("K") && !given("--K")) cfg.K = j["K"].get<std::size_t>();
    if (j.contains("mode") && !given("--mode")) cfg.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("prime") && !given("--prime")) cfg.prime = j["prime"].get<std::uint64_t>();
    if (j.contains("noise_eps") && !given("--noise-eps")) cfg.noise_eps = j["noise_eps"].get<double>();
    if (j.contains("eps0") && !given("--eps0")) cfg.eps0 = j["eps0"].get<double>();
    if (j.contains("seed") && !given("--seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("thresholds")) {
        for (const auto& [k, v] : j["thresholds"].items()) cfg.thresholds[k] = v.get<double>();
    }
    if (j.contains("input") && cfg.input.empty()) cfg.input = j["input"].get<std::string>();
    if (j.contains("output") && !given("--out")) cfg.output = j["output"].get<std::string>();
}

PronyThresholds thresholds_from(const RunConfig& cfg) {
    PronyThresholds th;
    for (const auto& [key, value] : cfg.thresholds) {
        if (key == "min_pivot_ratio") th.min_pivot_ratio = value;
        else if (key == "min_node_separation") th.min_node_separation = value;
        else if (key == "min_node_modulus") th.min_node_modulus = value;
        else if (key == "min_amplitude") th.min_amplitude = value;
        else if (key == "max_imag_ratio") th.max_imag_ratio = value;
        else throw ArgumentError("unknown threshold '" + key + "'");
    }
    return th;
}

// windows ------------------------------------------------------------------

struct WindowsArgs {
    std::string params;
    std::string sequence;
    std::string preset;
    std::string format;
};

int cmd_windows(const RunConfig& cfg, const WindowsArgs& a, std::ostream& out, const Logger& log) {
    const int sources = !a.params.empty() + !a.sequence.empty() + !a.preset.empty();
    if (sources != 1) throw ArgumentError("windows needs exactly one of --params, --sequence, --preset");

    if (!a.preset.empty()) {
        CaseStudyFixture fx = a.preset == "case-a" ? case_a_fixture()
                              : a.preset == "case-b" ? case_b_fixture()
                                                     : throw ArgumentError("unknown preset '" + a.preset + "'");
        const std::size_t K = cfg.K != 0 ? cfg.K : fx.observed_windows.size();
        const WindowData w = mixture_windows(fx.mixture, fx.W, K);
        log.info("preset " + fx.label + ": windows recomputed from the mixture");
        if (wants_csv(a.format, cfg.output)) {
            emit(to_csv(w), cfg.output, out);
        } else {
            Json j = to_json(w);
            validate_window_json(j);
            emit(j.dump(2), cfg.output, out);
        }
        return kOk;
    }

    if (cfg.W == 0) throw ArgumentError("--W is required");

    if (!a.params.empty() && cfg.mode != Mode::floating) {
        const auto params = IntegerParams::from_flat(parse_int_list(a.params));
        const std::size_t K = cfg.K != 0 ? cfg.K : 2 * params.degree() + 1;
        const std::size_t n_max = std::max(cfg.W * K, params.degree() + 1) - 1;
        std::vector<std::string> encoded;
        Json j{{"W", cfg.W}, {"K", K}};
        if (cfg.mode == Mode::exact) {
            const auto seq = generate_sequence_exact(params, n_max);
            const auto sums = window_sums_exact(seq, cfg.W, K);
            Json reals = Json::array();
            for (auto v : sums) {
                encoded.push_back(to_string(v));
                reals.push_back(static_cast<double>(v));
            }
            j["sums"] = reals;
            j["exact_sums"] = encoded;
        } else {
            if (!is_prime(cfg.prime)) throw ArgumentError("modular mode needs a prime --prime");
            const auto seq = generate_sequence_mod(params, n_max, cfg.prime);
            const auto sums = detail::block_sums<ModInt>(seq, cfg.W, K, ModInt(0, cfg.prime));
            Json reals = Json::array();
            for (const auto& v : sums) {
                encoded.push_back(std::to_string(v.value()));
                reals.push_back(static_cast<double>(v.value()));
            }
            j["sums"] = reals;
            j["residues"] = encoded;
            j["p"] = cfg.prime;
        }
        validate_window_json(j);
        if (wants_csv(a.format, cfg.output)) {
            std::ostringstream os;
            os << "k,S_k\n";
            for (std::size_t k = 0; k < encoded.size(); ++k) os << k << ',' << encoded[k] << '\n';
            emit(os.str(), cfg.output, out);
        } else {
            emit(j.dump(2), cfg.output, out);
        }
        return kOk;
    }

    std::vector<double> seq;
    std::size_t K = cfg.K;
    if (!a.params.empty()) {
        const auto params = RationalParams::from_flat(parse_real_list(a.params));
        if (K == 0) K = 2 * params.degree() + 1;
        seq = generate_sequence(params, std::max(cfg.W * K, params.degree() + 1) - 1);
    } else {
        std::ifstream in(a.sequence);
        if (!in) throw ArgumentError("cannot open '" + a.sequence + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        seq = parse_sequence(buf.str());
        if (K == 0) K = seq.size() / cfg.W;
        if (K == 0) throw ArgumentError("sequence shorter than one window");
    }
    const WindowData w = window_sums(seq, cfg.W, K);
    if (wants_csv(a.format, cfg.output)) {
        emit(to_csv(w), cfg.output, out);
    } else {
        Json j = to_json(w);
        validate_window_json(j);
        emit(j.dump(2), cfg.output, out);
    }
    return kOk;
}

// witness ------------------------------------------------------------------

struct WitnessArgs {
    std::string pi0;
    bool search = false;
    std::int64_t bound = 5;
    std::size_t max_trials = 100;
};

int cmd_witness(const RunConfig& cfg, const WitnessArgs& a, std::ostream& out, const Logger& log) {
    if (cfg.W == 0) throw ArgumentError("--W is required");
    if (!is_prime(cfg.prime)) throw ArgumentError("--prime " + std::to_string(cfg.prime) + " is not prime");
    std::optional<RankCertificate> cert;
    if (a.search) {
        if (cfg.d == 0) throw ArgumentError("--search needs --d");
        log.info("searching for a witness, seed " + std::to_string(cfg.seed));
        cert = search_witness(cfg.d, cfg.W, a.bound, cfg.prime, cfg.seed, a.max_trials);
        if (!cert) {
            log.info("no witness found in " + std::to_string(a.max_trials) + " trials");
            return kUnresolved;
        }
    } else {
        if (a.pi0.empty()) throw ArgumentError("witness needs --pi0 or --search");
        const auto params = IntegerParams::from_flat(parse_int_list(a.pi0));
        if (cfg.d != 0 && cfg.d != params.degree()) throw ArgumentError("--d does not match the length of --pi0");
        cert = certify_witness(params, cfg.W, cfg.prime);
    }
    if (!cert->exact()) log.info("exact arithmetic overflowed; certificate holds residues only");
    Json j = to_json(*cert);
    validate_certificate_json(j);
    emit(j.dump(2), cfg.output, out);
    return cert->nonzero ? kOk : kNegative;
}

// reconstruct / certify -----------------------------------------------------

WindowData read_windows(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ArgumentError("--windows is required");
    return load_windows(cfg.input, cfg.W);
}

int cmd_reconstruct(const RunConfig& cfg, std::ostream& out, const Logger& log) {
    if (cfg.d == 0) throw ArgumentError("--d is required");
    const WindowData w = read_windows(cfg);
    const PronyModel model = prony_reconstruct(w, cfg.d, thresholds_from(cfg));
    Json j = to_json(model);
    validate_model_json(j);
    emit(j.dump(2), cfg.output, out);
    if (model.degenerate()) {
        log.info("reconstruction is degenerate");
        return kNegative;
    }
    return kOk;
}

int cmd_certify(const RunConfig& cfg, std::ostream& out, const Logger& log) {
    if (cfg.d == 0) throw ArgumentError("--d is required");
    const WindowData w = read_windows(cfg);
    CertConfig cc;
    cc.eps0 = cfg.eps0;
    cc.prony = thresholds_from(cfg);
    const CertReport report = pipeline(w, cfg.d, cfg.noise_eps, cc);
    Json j = to_json(report);
    validate_report_json(j);
    emit(j.dump(2), cfg.output, out);
    log.debug("certificate value " + std::to_string(report.certificate_value) + ", threshold " +
              std::to_string(report.threshold));
    switch (report.decision) {
        case Decision::zero: return kOk;
        case Decision::nonzero: return kNegative;
        case Decision::inconclusive: return kUnresolved;
    }
    return kUnresolved;
}

// synth --------------------------------------------------------------------

struct SynthArgs {
    std::string label;
    std::string base = "case-a";
};

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw ArgumentError("cannot write '" + p.string() + "'");
    f << text;
}

std::string sequence_text(const std::vector<double>& y) {
    std::ostringstream os;
    os.precision(17);
    for (double v : y) os << v << '\n';
    return os.str();
}

int cmd_synth(const RunConfig& cfg, const SynthArgs& a, std::ostream& out, const Logger& log) {
    const std::filesystem::path dir = cfg.output.empty() ? std::filesystem::path(".") : std::filesystem::path(cfg.output);
    if (a.label == "case-a" || a.label == "case-b") {
        const CaseStudyFixture fx = a.label == "case-a" ? case_a_fixture() : case_b_fixture();
        std::filesystem::create_directories(dir);
        const WindowData observed(fx.observed_windows, fx.W);
        const WindowData truth(fx.true_windows, fx.W);
        write_file(dir / (fx.label + ".observed.csv"), to_csv(observed));
        write_file(dir / (fx.label + ".true.csv"), to_csv(truth));
        Json obs = to_json(observed);
        validate_window_json(obs);
        write_file(dir / (fx.label + ".observed.json"), obs.dump(2));
        Json fixture{{"label", fx.label},
                     {"d", fx.d},
                     {"W", fx.W},
                     {"rates", fx.mixture.rates()},
                     {"weights", fx.mixture.weights()},
                     {"true_windows", fx.true_windows},
                     {"observed_windows", fx.observed_windows},
                     {"noise_level", fx.noise_level}};
        write_file(dir / (fx.label + ".json"), fixture.dump(2));
        out << fixture.dump(2) << '\n';
        log.info("wrote " + fx.label + " fixture to " + dir.string());
        return kOk;
    }
    if (a.label == "case-c") {
        const CasePreset p = case_c_preset();
        out << Json{{"label", p.label}, {"d", p.d}, {"W", p.W}}.dump(2) << '\n';
        return kOk;
    }
    if (a.label == "collision") {
        if (cfg.W == 0) throw ArgumentError("collision needs --W");
        std::size_t d = cfg.d;
        CollisionBase base = case_a_fixture().mixture;
        if (a.base == "case-b") {
            base = case_b_fixture().mixture;
        } else if (a.base != "case-a") {
            const auto params = RationalParams::from_flat(parse_real_list(a.base));
            base = params;
            if (d == 0) d = params.degree();
        }
        if (d == 0) d = 3;
        const CollisionPair pair = collision_pair(base, d, cfg.W, cfg.K);
        std::filesystem::create_directories(dir);
        write_file(dir / "collision.in.txt", sequence_text(pair.y_in));
        write_file(dir / "collision.out.txt", sequence_text(pair.y_out));
        const WindowData win = window_sums(pair.y_in, cfg.W, cfg.K + 1);
        const WindowData wout = window_sums(pair.y_out, cfg.W, cfg.K + 1);
        Json summary{{"N", pair.N},
                     {"bump_indices", pair.bump_indices},
                     {"windows_in", win.sums},
                     {"windows_out", wout.sums},
                     {"identical", win.sums == wout.sums}};
        write_file(dir / "collision.json", summary.dump(2));
        out << summary.dump(2) << '\n';
        return kOk;
    }
    throw ArgumentError("unknown synth label '" + a.label + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-window neutrality certification"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string mode = "float";
    std::string config_path;
    app.add_option("--mode", mode, "Arithmetic: exact | float | modular");
    app.add_option("--prime", cfg.prime, "Prime modulus for modular work");
    app.add_option("--seed", cfg.seed, "PRNG seed");
    app.add_option("--out", cfg.output, "Output path (stdout when omitted; a directory for synth)");
    app.add_option("--config", config_path, "JSON RunConfig with defaults for any flag");

    auto add_shape = [&cfg](CLI::App* sub) {
        sub->add_option("--d", cfg.d, "Degree bound d");
        sub->add_option("--W", cfg.W, "Block length W");
        sub->add_option("--K", cfg.K, "Number of windows K");
    };

    WindowsArgs wa;
    auto* windows = app.add_subcommand("windows", "W-block window sums of a signal");
    add_shape(windows);
    windows->add_option("--params", wa.params, "Flat parameters y_0..y_d,q_1..q_d");
    windows->add_option("--sequence", wa.sequence, "File with one sample per line");
    windows->add_option("--preset", wa.preset, "case-a | case-b");
    windows->add_option("--format", wa.format, "json | csv");

    WitnessArgs wi;
    auto* witness = app.add_subcommand("witness", "Finite-field rank certificate for the window map");
    add_shape(witness);
    witness->add_option("--pi0", wi.pi0, "Integer point y_0..y_d,q_1..q_d");
    witness->add_flag("--search", wi.search, "Randomized search instead of --pi0");
    witness->add_option("--bound", wi.bound, "Coordinate bound for --search");
    witness->add_option("--max-trials", wi.max_trials, "Trial budget for --search");

    auto* reconstruct = app.add_subcommand("reconstruct", "Prony/Hankel reconstruction of window data");
    add_shape(reconstruct);
    reconstruct->add_option("--windows", cfg.input, "Window file (.json or CSV)");

    auto* certify = app.add_subcommand("certify", "End-to-end zero/nonzero/inconclusive decision");
    add_shape(certify);
    certify->add_option("--windows", cfg.input, "Window file (.json or CSV)");
    certify->add_option("--noise-eps", cfg.noise_eps, "Absolute sup-norm noise level of the windows");
    certify->add_option("--eps0", cfg.eps0, "Regime bound eps0");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Case-study fixtures and collision pairs");
    add_shape(synth);
    synth->add_option("label", sa.label, "case-a | case-b | case-c | collision")->required();
    synth->add_option("--base", sa.base, "Collision base: case-a | case-b | flat rational parameters");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    const Logger log(err);
    try {
        cfg.mode = parse_mode(mode);
        if (!config_path.empty()) {
            const bool mode_given = app.get_option("--mode")->count() > 0;
            apply_config_file(config_path, cfg, app);
            if (mode_given) cfg.mode = parse_mode(mode);
        }
        if (windows->parsed()) return cmd_windows(cfg, wa, out, log);
        if (witness->parsed()) return cmd_witness(cfg, wi, out, log);
        if (reconstruct->parsed()) return cmd_reconstruct(cfg, out, log);
        if (certify->parsed()) return cmd_certify(cfg, out, log);
        if (synth->parsed()) return cmd_synth(cfg, sa, out, log);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace dcert::cli
