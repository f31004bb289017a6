// Command-line front end: error-model sampling, single-trial decoding,
// Monte Carlo sweeps and threshold searches, and the bath-analytics tables.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "qecbath/bath.hpp"
#include "qecbath/harness.hpp"

using namespace qecbath;

namespace {

// Settings from a plain "key = value" file; when present they override the
// command-line flags.
class ConfigOverrides {
public:
    void load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file " + path);
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }
    void apply(const char* key, std::string& value) const {
        auto it = kv_.find(key);
        if (it != kv_.end()) value = it->second;
    }
    void apply(const char* key, double& value) const {
        auto it = kv_.find(key);
        if (it != kv_.end()) value = std::stod(it->second);
    }
    void apply(const char* key, long& value) const {
        auto it = kv_.find(key);
        if (it != kv_.end()) value = std::stol(it->second);
    }
    void apply(const char* key, int& value) const {
        auto it = kv_.find(key);
        if (it != kv_.end()) value = std::stoi(it->second);
    }
    void apply(const char* key, uint64_t& value) const {
        auto it = kv_.find(key);
        if (it != kv_.end()) value = std::stoull(it->second);
    }

private:
    static std::string trim(std::string s) {
        auto issp = [](unsigned char c) { return std::isspace(c); };
        while (!s.empty() && issp(s.front())) s.erase(s.begin());
        while (!s.empty() && issp(s.back())) s.pop_back();
        return s;
    }
    std::map<std::string, std::string> kv_;
};

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    if (out.empty()) throw std::invalid_argument("empty code-size list");
    return out;
}

DecoderSpec parse_decoder(const std::string& text) {
    if (text == "manhattan") return DecoderSpec::kManhattan;
    if (text == "correlated") return DecoderSpec::kCorrelated;
    throw std::invalid_argument("decoder must be 'manhattan' or 'correlated'");
}

void write_output(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << payload;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::vector<double> time_grid(double tmin, double tmax, int points, bool log_axis) {
    if (points < 2 || !(tmin > 0 || !log_axis) || !(tmax > tmin))
        throw std::invalid_argument("bad time grid");
    std::vector<double> g;
    for (int i = 0; i < points; ++i) {
        double u = static_cast<double>(i) / (points - 1);
        g.push_back(log_axis ? tmin * std::pow(tmax / tmin, u)
                             : tmin + (tmax - tmin) * u);
    }
    return g;
}

struct CommonOpts {
    std::string model_text = "iid:0.1";
    std::string decoder_text = "manhattan";
    std::string sizes_text = "8,12,16,24";
    std::string out_path;
    std::string format = "csv";
    std::string config_path;
    uint64_t seed = 1;
    long failures = 1000;
    long max_trials = 100000;
    int batch = 256;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_mc) {
    cmd->add_option("--model", o.model_text, "noise model, e.g. iid:0.1");
    cmd->add_option("--L", o.sizes_text, "code size(s), comma separated");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json");
    cmd->add_option("--config", o.config_path, "key = value file overriding flags");
    if (with_mc) {
        cmd->add_option("--decoder", o.decoder_text, "manhattan or correlated");
        cmd->add_option("--failures", o.failures, "stop after this many failures");
        cmd->add_option("--max-trials", o.max_trials, "trial cap per point");
        cmd->add_option("--batch", o.batch, "trials per scheduling batch");
        cmd->add_option("--workers", o.workers, "worker threads (0 = all)");
    }
}

void apply_common(const ConfigOverrides& cfg, CommonOpts& o) {
    cfg.apply("model", o.model_text);
    cfg.apply("L", o.sizes_text);
    cfg.apply("seed", o.seed);
    cfg.apply("out", o.out_path);
    cfg.apply("format", o.format);
    cfg.apply("decoder", o.decoder_text);
    cfg.apply("failures", o.failures);
    cfg.apply("max-trials", o.max_trials);
    cfg.apply("batch", o.batch);
    cfg.apply("workers", o.workers);
}

ConfigOverrides load_config(const CommonOpts& o) {
    ConfigOverrides cfg;
    if (!o.config_path.empty()) cfg.load(o.config_path);
    return cfg;
}

int run_sample(CommonOpts& o) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    CodeParams c(parse_sizes(o.sizes_text).front());
    NoiseModel model = parse_noise_model(o.model_text);
    RandomStream rng(derive_seed(o.seed, 0));
    ErrorConfig e = sample(model, c, rng);
    Syndrome s = syndrome_of(e, c);
    std::string payload;
    if (o.format == "json") {
        payload = std::string("{\"L\": ") + std::to_string(c.L) +
                  ", \"model\": \"" + describe(model) + "\", \"seed\": " +
                  std::to_string(o.seed) + ", \"weight\": " +
                  std::to_string(e.weight()) + ", \"anyons\": " +
                  std::to_string(s.size()) + ", \"flipped_hex\": \"" + e.to_hex() +
                  "\"}\n";
    } else {
        payload = "L,model,seed,weight,anyons,flipped_hex\n" + std::to_string(c.L) +
                  "," + describe(model) + "," + std::to_string(o.seed) + "," +
                  std::to_string(e.weight()) + "," + std::to_string(s.size()) + "," +
                  e.to_hex() + "\n";
    }
    write_output(o.out_path, payload);
    return 0;
}

int run_decode(CommonOpts& o) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    CodeParams c(parse_sizes(o.sizes_text).front());
    NoiseModel model = parse_noise_model(o.model_text);
    DecoderKind kind = decoder_for(parse_decoder(o.decoder_text), model);
    RandomStream rng(derive_seed(o.seed, 0));
    ErrorConfig e = sample(model, c, rng);
    Syndrome s = syndrome_of(e, c);
    ErrorConfig corr = decode(s, kind, c);
    WindingClass w = winding_class(e ^ corr, c);
    std::printf("model           %s\n", describe(model).c_str());
    std::printf("L               %d   (%d qubits)\n", c.L, c.n_qubits());
    std::printf("error weight    %d\n", e.weight());
    std::printf("anyons          %d\n", s.size());
    std::printf("correction      %d qubits\n", corr.weight());
    std::printf("residual class  (%d, %d)\n", w.wx, w.wy);
    std::printf("success         %s\n", w.trivial() ? "yes" : "no");
    return 0;
}

int run_sweep_cmd(CommonOpts& o, std::string& sweep_spec) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    cfg.apply("sweep", sweep_spec);
    NoiseModel base = parse_noise_model(o.model_text);

    SweepConfig sc;
    sc.code_sizes = parse_sizes(o.sizes_text);
    sc.decoder = parse_decoder(o.decoder_text);
    sc.target_failures = o.failures;
    sc.max_trials = o.max_trials;
    sc.batch_size = o.batch;
    sc.seed = o.seed;
    sc.workers = o.workers;
    if (sweep_spec.empty()) {
        double anchor = std::visit(
            [](const auto& m) -> double {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, IidNoise>) return m.p;
                else if constexpr (std::is_same_v<T, PairNoise>) return m.p2;
                else return m.f;
            },
            base);
        sc.points.push_back({anchor, base});
    } else {
        auto eq = sweep_spec.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--sweep needs axis=lo:hi:count");
        std::string axis = sweep_spec.substr(0, eq);
        double lo, hi;
        int count;
        if (std::sscanf(sweep_spec.c_str() + eq + 1, "%lf:%lf:%d", &lo, &hi,
                        &count) != 3 ||
            count < 1)
            throw std::invalid_argument("--sweep needs axis=lo:hi:count");
        for (int i = 0; i < count; ++i) {
            double v = count == 1
                           ? lo
                           : lo + (hi - lo) * static_cast<double>(i) / (count - 1);
            sc.points.push_back({v, with_axis(base, axis, v)});
        }
    }
    SweepResult result = run_sweep(sc);
    write_output(o.out_path, o.format == "json" ? emit_json(result)
                                                : emit_csv(result));
    return 0;
}

int run_threshold(CommonOpts& o, std::string& axis, std::string& bracket,
                  double& width, long& px_trials) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    cfg.apply("axis", axis);
    cfg.apply("bracket", bracket);
    cfg.apply("width", width);
    cfg.apply("px-trials", px_trials);

    ThresholdConfig tc;
    tc.base_model = parse_noise_model(o.model_text);
    tc.axis = axis;
    if (std::sscanf(bracket.c_str(), "%lf,%lf", &tc.bracket_lo, &tc.bracket_hi) != 2)
        throw std::invalid_argument("--bracket needs lo,hi");
    tc.width = width;
    tc.decoder = parse_decoder(o.decoder_text);
    tc.code_sizes = parse_sizes(o.sizes_text);
    tc.target_failures = o.failures;
    tc.max_trials = o.max_trials;
    tc.batch_size = o.batch;
    tc.seed = o.seed;
    tc.workers = o.workers;

    ThresholdResult res = find_threshold(tc);
    std::printf("threshold %s = %.6f  (bracket [%.6f, %.6f])\n", axis.c_str(),
                res.estimate, res.lo, res.hi);
    NoiseModel at = with_axis(tc.base_model, axis, res.estimate);
    if (std::holds_alternative<IidNoise>(at) || std::holds_alternative<PairNoise>(at))
        std::printf("single-qubit rate p_x = %.6f\n", single_qubit_rate(at));
    else if (px_trials > 0) {
        CodeParams c(tc.code_sizes.back());
        RateEstimate est = estimate_px(at, c, px_trials, derive_seed(o.seed, 0xee));
        std::printf("single-qubit rate p_x = %.6f +- %.6f (%ld trials)\n", est.p_hat,
                    est.stderr_, px_trials);
    }
    return 0;
}

struct BathOpts {
    double s = 1.0, alpha = 0.01, omega0 = 1.0, omegac = 30.0;
    double temperature = 0.01;
    double tmin = 0.01, tmax = 100.0;
    int points = 200;
    bool linear = false;
    std::string mode = "closed";
};

int run_bath(CommonOpts& o, BathOpts& b) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    cfg.apply("s", b.s);
    cfg.apply("alpha", b.alpha);
    cfg.apply("omega0", b.omega0);
    cfg.apply("omegac", b.omegac);
    cfg.apply("T", b.temperature);
    cfg.apply("tmin", b.tmin);
    cfg.apply("tmax", b.tmax);
    cfg.apply("points", b.points);
    cfg.apply("mode", b.mode);

    SpectralParams p{b.s, b.alpha, b.omega0, b.omegac,
                     b.temperature == 0 ? std::numeric_limits<double>::infinity()
                                        : 1.0 / b.temperature};
    if (!closed_form_well_approximated(p))
        std::fprintf(stderr,
                     "note: beta * omega_c = %g < 100; the closed form for "
                     "s = %g is a rough approximation here\n",
                     p.beta * p.omega_c, p.s);
    EvalMode mode = b.mode == "quadrature" ? EvalMode::kQuadrature
                                           : EvalMode::kClosedForm;
    std::string payload = "t,Lambda,p_d\n";
    for (double t : time_grid(b.tmin, b.tmax, b.points, !b.linear)) {
        double lam = decoherence_exponent(p, t, mode);
        payload += fmt(t) + "," + fmt(lam) + "," + fmt(flip_probability(lam)) + "\n";
    }
    write_output(o.out_path, payload);
    return 0;
}

struct TimesOpts {
    double length = 1e4;
    double lambda = 0.1, v = 1.0, temperature = 0.01, omegac = 30.0;
    double p_tilde_c = 0.109;
    double tmin = 0.1, tmax = 1000.0;
    int points = 400;
};

int run_times(CommonOpts& o, TimesOpts& t) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    cfg.apply("length", t.length);
    cfg.apply("lambda", t.lambda);
    cfg.apply("v", t.v);
    cfg.apply("T", t.temperature);
    cfg.apply("omegac", t.omegac);
    cfg.apply("pc", t.p_tilde_c);
    cfg.apply("tmin", t.tmin);
    cfg.apply("tmax", t.tmax);
    cfg.apply("points", t.points);

    BathParams bath{t.lambda, t.v, t.temperature, t.omegac, 1.0, 2, 0.0};
    QecTimes qt = qec_cycle_times(t.length, bath, t.p_tilde_c);
    const char* regime = qt.regime == BreakdownRegime::kDirect ? "direct"
                         : qt.regime == BreakdownRegime::kDirectOrSub
                             ? "direct-or-sub"
                             : "direct-or-super";
    std::fprintf(stderr, "tau_d = %g\n", qt.tau_d);
    std::fprintf(stderr, "tau_sub = %s\n",
                 qt.tau_sub ? fmt(*qt.tau_sub).c_str() : "n/a");
    std::fprintf(stderr, "tau_super = %s\n",
                 qt.tau_super ? fmt(*qt.tau_super).c_str() : "n/a");
    std::fprintf(stderr, "regime = %s  (size cutoffs %g, %g)\n", regime,
                 qt.cutoff_sub, qt.cutoff_super);

    std::string payload = "t,A,B,C,p_x\n";
    for (double tt : time_grid(t.tmin, t.tmax, t.points, true)) {
        ErrorBudget eb = error_budget(tt, t.length, bath);
        payload += fmt(tt) + "," + fmt(eb.direct) + "," + fmt(eb.superluminal) +
                   "," + fmt(eb.subluminal) + "," + fmt(eb.total()) + "\n";
    }
    write_output(o.out_path, payload);
    return 0;
}

struct ChannelOpts {
    double lambda = 0.1, v = 1.0, omegac = 30.0, separation = 1.0;
    double tmin = 0.01, tmax = 100.0;
    int points = 200;
};

int run_channel(CommonOpts& o, ChannelOpts& ch) {
    ConfigOverrides cfg = load_config(o);
    apply_common(cfg, o);
    cfg.apply("lambda", ch.lambda);
    cfg.apply("v", ch.v);
    cfg.apply("omegac", ch.omegac);
    cfg.apply("R", ch.separation);
    cfg.apply("tmin", ch.tmin);
    cfg.apply("tmax", ch.tmax);
    cfg.apply("points", ch.points);

    // 2D Ohmic bath at zero temperature, where the cross correlator has a
    // closed form
    const double alpha =
        ch.lambda * ch.lambda / (2.0 * M_PI * ch.v * ch.v);
    std::string payload = "Lambda,C,J,fidelity\n";
    for (double t : time_grid(ch.tmin, ch.tmax, ch.points, true)) {
        double lam = alpha * std::log1p(ch.omegac * ch.omegac * t * t);
        double corr = ohmic_2d_correlator(ch.lambda, ch.v, ch.separation, t);
        if (corr < -lam) corr = -lam;  // clamp cutoff-scale transients
        double coupling = induced_coupling(
            2, 0.0, ch.lambda, ch.v, ch.omegac, ch.separation, t);
        payload += fmt(lam) + "," + fmt(corr) + "," + fmt(coupling) + "," +
                   fmt(ebit_fidelity(lam, corr, coupling)) + "\n";
    }
    write_output(o.out_path, payload);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toric-code error correction under correlated bosonic-bath noise"};
    app.require_subcommand(1);

    CommonOpts sample_o, decode_o, sweep_o, thr_o, bath_o, times_o, chan_o;
    std::string sweep_spec;
    std::string thr_axis = "p", thr_bracket = "0.08,0.13";
    double thr_width = 1e-3;
    long thr_px_trials = 0;
    BathOpts bopt;
    TimesOpts topt;
    ChannelOpts copt;

    CLI::App* c_sample = app.add_subcommand("sample", "dump one error configuration");
    add_common(c_sample, sample_o, false);

    CLI::App* c_decode = app.add_subcommand("decode", "run one verbose trial");
    add_common(c_decode, decode_o, true);

    CLI::App* c_sweep = app.add_subcommand("sweep", "logical error rates on a grid");
    add_common(c_sweep, sweep_o, true);
    c_sweep->add_option("--sweep", sweep_spec, "swept axis, e.g. p=0.08:0.13:11");

    CLI::App* c_thr = app.add_subcommand("threshold", "bisect for the threshold");
    add_common(c_thr, thr_o, true);
    c_thr->add_option("--axis", thr_axis, "model parameter to bisect");
    c_thr->add_option("--bracket", thr_bracket, "lo,hi bracket");
    c_thr->add_option("--width", thr_width, "bisection stop width");
    c_thr->add_option("--px-trials", thr_px_trials,
                      "estimate p_x at the threshold by sampling");

    CLI::App* c_bath = app.add_subcommand("bath", "decoherence exponent table");
    add_common(c_bath, bath_o, false);
    c_bath->add_option("--s", bopt.s, "spectral exponent");
    c_bath->add_option("--alpha", bopt.alpha, "dimensionless strength");
    c_bath->add_option("--omega0", bopt.omega0, "characteristic frequency");
    c_bath->add_option("--omegac", bopt.omegac, "high-frequency cutoff");
    c_bath->add_option("--T", bopt.temperature, "temperature (0 = zero-T)");
    c_bath->add_option("--tmin", bopt.tmin);
    c_bath->add_option("--tmax", bopt.tmax);
    c_bath->add_option("--points", bopt.points);
    c_bath->add_flag("--linear", bopt.linear, "linear instead of log time grid");
    c_bath->add_option("--mode", bopt.mode, "closed or quadrature");

    CLI::App* c_times = app.add_subcommand("times", "error budget and cycle times");
    add_common(c_times, times_o, false);
    c_times->add_option("--length", topt.length, "code size L (lattice units)");
    c_times->add_option("--lambda", topt.lambda, "coupling strength");
    c_times->add_option("--v", topt.v, "mode velocity");
    c_times->add_option("--T", topt.temperature, "temperature");
    c_times->add_option("--omegac", topt.omegac, "high-frequency cutoff");
    c_times->add_option("--pc", topt.p_tilde_c, "critical error rate");
    c_times->add_option("--tmin", topt.tmin);
    c_times->add_option("--tmax", topt.tmax);
    c_times->add_option("--points", topt.points);

    CLI::App* c_chan = app.add_subcommand("channel", "two-qubit channel table");
    add_common(c_chan, chan_o, false);
    c_chan->add_option("--lambda", copt.lambda, "coupling strength");
    c_chan->add_option("--v", copt.v, "mode velocity");
    c_chan->add_option("--omegac", copt.omegac, "high-frequency cutoff");
    c_chan->add_option("--R", copt.separation, "qubit separation");
    c_chan->add_option("--tmin", copt.tmin);
    c_chan->add_option("--tmax", copt.tmax);
    c_chan->add_option("--points", copt.points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_sample->parsed()) return run_sample(sample_o);
        if (c_decode->parsed()) return run_decode(decode_o);
        if (c_sweep->parsed()) return run_sweep_cmd(sweep_o, sweep_spec);
        if (c_thr->parsed())
            return run_threshold(thr_o, thr_axis, thr_bracket, thr_width,
                                 thr_px_trials);
        if (c_bath->parsed()) return run_bath(bath_o, bopt);
        if (c_times->parsed()) return run_times(times_o, topt);
        if (c_chan->parsed()) return run_channel(chan_o, copt);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
