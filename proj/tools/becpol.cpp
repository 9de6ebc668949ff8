// becpol: exact and Monte Carlo study of how fast BEC sub-channels
// polarize, plus BEC polar-code construction built on the same kernel.

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "becpol/bounds.hpp"
#include "becpol/design.hpp"
#include "becpol/exact.hpp"
#include "becpol/io.hpp"
#include "becpol/stochastic.hpp"

using namespace becpol;

namespace {

// Reads {"option": value, "subcommand": {"option": value}} JSON files into
// CLI11 config items; explicit command-line flags win over file values.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        std::vector<CLI::ConfigItem> items;
        if (!j.is_object()) throw CLI::ConfigError("config file must hold a JSON object");
        collect(j, {}, items);
        return items;
    }

  private:
    static void collect(const nlohmann::json& j, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                collect(value, deeper, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_string())
                item.inputs.push_back(value.get<std::string>());
            else if (value.is_boolean())
                item.inputs.push_back(value.get<bool>() ? "true" : "false");
            else
                item.inputs.push_back(value.dump());
            items.push_back(std::move(item));
        }
    }
};

struct Range {
    int lo;
    int hi;
};

Range parse_range(const std::string& text, int min_lo) {
    const auto dots = text.find("..");
    Range r{};
    try {
        if (dots == std::string::npos) {
            r.lo = r.hi = std::stoi(text);
        } else {
            r.lo = std::stoi(text.substr(0, dots));
            r.hi = std::stoi(text.substr(dots + 2));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected N or LO..HI, got '" + text + "'");
    }
    if (r.lo < min_lo || r.hi < r.lo)
        throw CLI::ValidationError("range", "need " + std::to_string(min_lo) +
                                                " <= LO <= HI in '" + text + "'");
    return r;
}

// Semantic parameters only: no thread count and no output path, so runs
// that differ only in those produce identical artifact bytes.
struct Echo {
    ConfigEcho map;
    void put(const std::string& key, const std::string& v) { map[key] = v; }
    void put(const std::string& key, double v) { map[key] = format_double(v); }
    void put(const std::string& key, std::uint64_t v) { map[key] = std::to_string(v); }
    void put(const std::string& key, int v) { map[key] = std::to_string(v); }
    void stamp(bool no_timestamp) {
        if (!no_timestamp) map["generated"] = iso8601_utc_now();
    }
    nlohmann::json json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : map) j[k] = v;
        return j;
    }
};

double bits_or_nats(double bits, bool nats) { return nats ? bits * std::numbers::ln2 : bits; }

const char* unit_name(bool nats) { return nats ? "nats" : "bits"; }

void emit_curve(const std::string& out, const std::string& format, const Echo& echo,
                const EscapeCurve& curve) {
    if (format == "json") {
        write_json(out, nlohmann::json{{"config", echo.json()}, {"curve", curve_json(curve)}});
    } else {
        write_csv(out, echo.map, {"n", "exponent_bits"}, curve_rows(curve));
    }
}

int run(int argc, char** argv) {
    CLI::App app{"escape-rate toolkit for BEC channel polarization"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config {\"subcommand\": {\"flag\": value}} merged under explicit flags");
    app.get_config_ptr()->configurable(false);
    // let a --config placed after the subcommand reach the main app
    app.fallthrough();

    // ---- exact-pn ------------------------------------------------------
    auto* sc_pn = app.add_subcommand("exact-pn", "exact P^z(Z_n in [a,b]) by pruned enumeration");
    struct {
        double z = 0.5, a = 0.25, b = 0.75;
        int n = 16;
        std::uint64_t budget = std::uint64_t(1) << 31;
        int threads = 0;
        std::string out = "exact_pn.json";
        bool no_timestamp = false;
    } pn;
    sc_pn->add_option("--z", pn.z, "start erasure probability")->check(CLI::Range(0.0, 1.0));
    sc_pn->add_option("--n", pn.n, "polarization depth")->check(CLI::Range(0, 60));
    sc_pn->add_option("--a", pn.a, "window lower end");
    sc_pn->add_option("--b", pn.b, "window upper end");
    sc_pn->add_option("--budget", pn.budget, "surviving-branch cap");
    sc_pn->add_option("--threads", pn.threads, "0 = all cores");
    sc_pn->add_option("--out", pn.out, "output JSON path");
    sc_pn->add_flag("--no-timestamp", pn.no_timestamp, "omit the generated= line");
    sc_pn->callback([&] {
        const TargetInterval target(pn.a, pn.b);
        EnumerationOptions opts;
        opts.budget = pn.budget;
        opts.threads = pn.threads;
        const double p = exact_pn(pn.z, pn.n, target, opts);
        const double theta = pn.n >= 1 && p > 0.0
                                 ? std::log2(p) / pn.n
                                 : -std::numeric_limits<double>::infinity();
        Echo echo;
        echo.put("subcommand", "exact-pn");
        echo.put("z", pn.z);
        echo.put("n", pn.n);
        echo.put("a", pn.a);
        echo.put("b", pn.b);
        echo.put("seed", std::uint64_t(0));
        echo.put("budget", pn.budget);
        echo.stamp(pn.no_timestamp);
        write_json(pn.out, nlohmann::json{{"config", echo.json()},
                                          {"z", pn.z},
                                          {"n", pn.n},
                                          {"target", {{"a", pn.a}, {"b", pn.b}}},
                                          {"p", p},
                                          {"theta_bits", double_to_json(theta)}});
        std::printf("p_%d(%.17g) = %.17g  theta = %.6g bits\n", pn.n, pn.z, p, theta);
    });

    // ---- preimage ------------------------------------------------------
    auto* sc_pre = app.add_subcommand("preimage", "materialize the depth-n preimage cells");
    struct {
        double a = 0.25, b = 0.75, tol = 1e-14;
        int n = 8;
        std::uint64_t budget = std::uint64_t(1) << 31;
        int threads = 0;
        std::string out = "preimage.json";
        std::string cells_out;
        bool no_timestamp = false;
    } pre;
    sc_pre->add_option("--n", pre.n, "depth")->check(CLI::Range(0, 60));
    sc_pre->add_option("--a", pre.a, "window lower end");
    sc_pre->add_option("--b", pre.b, "window upper end");
    sc_pre->add_option("--tol", pre.tol, "subtree pruning tolerance");
    sc_pre->add_option("--budget", pre.budget, "surviving-branch cap");
    sc_pre->add_option("--threads", pre.threads, "0 = all cores");
    sc_pre->add_option("--out", pre.out, "report JSON path");
    sc_pre->add_option("--cells-out", pre.cells_out, "optional CSV dump word,lo,hi");
    sc_pre->add_flag("--no-timestamp", pre.no_timestamp, "omit the generated= line");
    sc_pre->callback([&] {
        const TargetInterval target(pre.a, pre.b);
        EnumerationOptions opts;
        opts.budget = pre.budget;
        opts.threads = pre.threads;
        const PreimageEnumeration e = preimage_cells(pre.n, target, pre.tol, opts);
        Echo echo;
        echo.put("subcommand", "preimage");
        echo.put("n", pre.n);
        echo.put("a", pre.a);
        echo.put("b", pre.b);
        echo.put("tol", pre.tol);
        echo.put("budget", pre.budget);
        echo.stamp(pre.no_timestamp);
        write_json(pre.out, nlohmann::json{{"config", echo.json()},
                                           {"report", enumeration_report_json(e)}});
        if (!pre.cells_out.empty()) {
            std::vector<std::vector<double>> rows;
            rows.reserve(e.cells.size());
            for (const PreimageCell& c : e.cells)
                rows.push_back({static_cast<double>(c.word_bits), c.lo, c.hi});
            write_csv(pre.cells_out, echo.map, {"word", "lo", "hi"}, rows);
        }
        std::printf("n=%d cells=%zu pruned=%llu mass_bound=%.6g b_n = %.6g bits\n", pre.n,
                    e.cells.size(), static_cast<unsigned long long>(e.pruned_words),
                    e.pruned_mass_bound, e.exponent_bits());
    });

    // ---- escape-curve / bn-curve ----------------------------------------
    auto* sc_esc = app.add_subcommand("escape-curve",
                                      "a_n (or theta_n at fixed z) against depth, with tail fit");
    struct {
        std::string n_range = "8..24";
        std::string tail;
        std::string kind = "sup";
        double z = 0.5, a = 0.25, b = 0.75, region_a = 0.25, region_b = 0.75, tol = 1e-14;
        std::uint64_t budget = std::uint64_t(1) << 31;
        int threads = 0;
        std::string out = "escape_curve.csv";
        std::string format = "csv";
        bool no_timestamp = false;
        bool nats = false;
    } esc;
    sc_esc->add_option("--n", esc.n_range, "depth range LO..HI");
    sc_esc->add_option("--tail", esc.tail, "fit window LO..HI (default max(16,LO)..HI)");
    sc_esc->add_option("--kind", esc.kind, "sup | theta")
        ->check(CLI::IsMember({"sup", "theta"}));
    sc_esc->add_option("--z", esc.z, "start point (kind=theta only)");
    sc_esc->add_option("--a", esc.a, "window lower end");
    sc_esc->add_option("--b", esc.b, "window upper end");
    sc_esc->add_option("--region-a", esc.region_a, "sup region lower end");
    sc_esc->add_option("--region-b", esc.region_b, "sup region upper end");
    sc_esc->add_option("--tol", esc.tol, "enumeration pruning tolerance");
    sc_esc->add_option("--budget", esc.budget, "surviving-branch cap");
    sc_esc->add_option("--threads", esc.threads, "0 = all cores");
    sc_esc->add_option("--out", esc.out, "output path");
    sc_esc->add_option("--format", esc.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc_esc->add_flag("--no-timestamp", esc.no_timestamp, "omit the generated= line");
    sc_esc->add_flag("--nats", esc.nats, "print the summary in nats");
    sc_esc->callback([&] {
        const Range nr = parse_range(esc.n_range, 1);
        const TargetInterval target(esc.a, esc.b);
        const TargetInterval region(esc.region_a, esc.region_b);
        EnumerationOptions opts;
        opts.budget = esc.budget;
        opts.tol = esc.tol;
        opts.threads = esc.threads;
        EscapeCurve curve = esc.kind == "sup"
                                ? an_curve(nr.lo, nr.hi, target, region, opts)
                                : theta_curve(esc.z, nr.lo, nr.hi, target, opts);
        if (!esc.tail.empty()) {
            const Range tr = parse_range(esc.tail, 1);
            curve.tail_lo = tr.lo;
            curve.tail_hi = tr.hi;
        }
        Echo echo;
        echo.put("subcommand", "escape-curve");
        echo.put("kind", esc.kind);
        echo.put("n", esc.n_range);
        echo.put("a", esc.a);
        echo.put("b", esc.b);
        echo.put("region_a", esc.region_a);
        echo.put("region_b", esc.region_b);
        if (esc.kind == "theta") echo.put("z", esc.z);
        echo.put("tol", esc.tol);
        echo.put("budget", esc.budget);

        int tail_points = 0;
        for (const CurvePoint& p : curve.points)
            if (p.n >= curve.tail_lo && p.n <= curve.tail_hi && std::isfinite(p.exponent_bits))
                ++tail_points;
        if (tail_points >= 4) {
            const RateBracket fit = extrapolate_rate(curve);
            curve.tail_estimate = fit.point_bits;
            echo.put("tail_window",
                     std::to_string(curve.tail_lo) + ".." + std::to_string(curve.tail_hi));
            echo.put("tail_estimate_bits", fit.point_bits);
            echo.put("tail_slope", fit.slope);
            echo.put("bracket_lower_bits", fit.lower_bits);
            echo.put("bracket_upper_bits", fit.upper_bits);
            std::printf("%s curve n=%d..%d: tail lambda = %.6g %s (c=%.4g, %d pts), bracket "
                        "[%.6g, %.6g] %s\n",
                        esc.kind.c_str(), nr.lo, nr.hi,
                        bits_or_nats(fit.point_bits, esc.nats), unit_name(esc.nats), fit.slope,
                        fit.points_used, bits_or_nats(fit.lower_bits, esc.nats),
                        bits_or_nats(fit.upper_bits, esc.nats), unit_name(esc.nats));
        } else {
            std::printf("%s curve n=%d..%d: tail fit skipped (fewer than 4 window points)\n",
                        esc.kind.c_str(), nr.lo, nr.hi);
        }
        echo.stamp(esc.no_timestamp);
        emit_curve(esc.out, esc.format, echo, curve);
    });

    auto* sc_bn = app.add_subcommand("bn-curve", "integral exponent b_n against depth");
    struct {
        std::string n_range = "8..24";
        std::string tail;
        double a = 0.25, b = 0.75, tol = 1e-14;
        std::uint64_t budget = std::uint64_t(1) << 31;
        int threads = 0;
        std::string out = "bn_curve.csv";
        std::string format = "csv";
        bool no_timestamp = false;
        bool nats = false;
    } bnc;
    sc_bn->add_option("--n", bnc.n_range, "depth range LO..HI");
    sc_bn->add_option("--tail", bnc.tail, "fit window LO..HI (default max(16,LO)..HI)");
    sc_bn->add_option("--a", bnc.a, "window lower end");
    sc_bn->add_option("--b", bnc.b, "window upper end");
    sc_bn->add_option("--tol", bnc.tol, "enumeration pruning tolerance");
    sc_bn->add_option("--budget", bnc.budget, "surviving-branch cap");
    sc_bn->add_option("--threads", bnc.threads, "0 = all cores");
    sc_bn->add_option("--out", bnc.out, "output path");
    sc_bn->add_option("--format", bnc.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc_bn->add_flag("--no-timestamp", bnc.no_timestamp, "omit the generated= line");
    sc_bn->add_flag("--nats", bnc.nats, "print the summary in nats");
    sc_bn->callback([&] {
        const Range nr = parse_range(bnc.n_range, 1);
        const TargetInterval target(bnc.a, bnc.b);
        EnumerationOptions opts;
        opts.budget = bnc.budget;
        opts.tol = bnc.tol;
        opts.threads = bnc.threads;
        EscapeCurve curve = bn_curve(nr.lo, nr.hi, target, opts);
        if (!bnc.tail.empty()) {
            const Range tr = parse_range(bnc.tail, 1);
            curve.tail_lo = tr.lo;
            curve.tail_hi = tr.hi;
        }
        Echo echo;
        echo.put("subcommand", "bn-curve");
        echo.put("n", bnc.n_range);
        echo.put("a", bnc.a);
        echo.put("b", bnc.b);
        echo.put("tol", bnc.tol);
        echo.put("budget", bnc.budget);
        int tail_points = 0;
        for (const CurvePoint& p : curve.points)
            if (p.n >= curve.tail_lo && p.n <= curve.tail_hi && std::isfinite(p.exponent_bits))
                ++tail_points;
        if (tail_points >= 4) {
            const RateBracket fit = extrapolate_rate(curve);
            curve.tail_estimate = fit.point_bits;
            echo.put("tail_window",
                     std::to_string(curve.tail_lo) + ".." + std::to_string(curve.tail_hi));
            echo.put("tail_estimate_bits", fit.point_bits);
            echo.put("tail_slope", fit.slope);
            std::printf("b_n curve n=%d..%d: tail = %.6g %s (c=%.4g)\n", nr.lo, nr.hi,
                        bits_or_nats(fit.point_bits, bnc.nats), unit_name(bnc.nats), fit.slope);
        } else {
            std::printf("b_n curve n=%d..%d: tail fit skipped (fewer than 4 window points)\n",
                        nr.lo, nr.hi);
        }
        echo.stamp(bnc.no_timestamp);
        emit_curve(bnc.out, bnc.format, echo, curve);
    });

    // ---- mc-pn ----------------------------------------------------------
    auto* sc_mc = app.add_subcommand("mc-pn", "Monte Carlo estimate of P^z(Z_n in [a,b])");
    struct {
        double z = 0.5, a = 0.25, b = 0.75;
        int n = 16;
        std::uint64_t samples = 1000000, seed = 0, stream = 0;
        int threads = 0;
        std::string out = "mc_pn.csv";
        std::string format = "csv";
        bool no_timestamp = false;
    } mc;
    sc_mc->add_option("--z", mc.z, "start erasure probability")->check(CLI::Range(0.0, 1.0));
    sc_mc->add_option("--n", mc.n, "depth")->check(CLI::Range(0, 100000));
    sc_mc->add_option("--a", mc.a, "window lower end");
    sc_mc->add_option("--b", mc.b, "window upper end");
    sc_mc->add_option("--samples", mc.samples, "trajectory count");
    sc_mc->add_option("--seed", mc.seed, "rng seed");
    sc_mc->add_option("--stream", mc.stream, "rng stream");
    sc_mc->add_option("--threads", mc.threads, "0 = all cores");
    sc_mc->add_option("--out", mc.out, "output path");
    sc_mc->add_option("--format", mc.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc_mc->add_flag("--no-timestamp", mc.no_timestamp, "omit the generated= line");
    sc_mc->callback([&] {
        const TargetInterval target(mc.a, mc.b);
        const MCEstimate est =
            mc_pn(mc.z, mc.n, target, mc.samples, RngSpec{mc.seed, mc.stream}, mc.threads);
        Echo echo;
        echo.put("subcommand", "mc-pn");
        echo.put("z", mc.z);
        echo.put("n", mc.n);
        echo.put("a", mc.a);
        echo.put("b", mc.b);
        echo.put("samples", mc.samples);
        echo.put("seed", mc.seed);
        echo.put("stream", mc.stream);
        echo.stamp(mc.no_timestamp);
        if (mc.format == "json") {
            write_json(mc.out, nlohmann::json{{"config", echo.json()},
                                              {"samples", est.samples},
                                              {"mean", est.mean},
                                              {"std_error", est.std_error}});
        } else {
            write_csv(mc.out, echo.map, {"samples", "mean", "std_error"},
                      {{static_cast<double>(est.samples), est.mean, est.std_error}});
        }
        std::printf("mc p_%d(%.17g) = %.10g +- %.3g (%llu samples)\n", mc.n, mc.z, est.mean,
                    est.std_error, static_cast<unsigned long long>(est.samples));
    });

    // ---- threshold-dist --------------------------------------------------
    auto* sc_th = app.add_subcommand("threshold-dist",
                                     "threshold-point samples and their KS uniformity");
    struct {
        int depth = 64;
        std::uint64_t samples = 100000, seed = 0, stream = 0;
        double alpha = 0.01;
        int threads = 0;
        std::string out = "thresholds.txt";
        bool no_timestamp = false;
    } th;
    sc_th->add_option("--depth", th.depth, "inverse composition depth")->check(CLI::Range(1, 100000));
    sc_th->add_option("--samples", th.samples, "sample count");
    sc_th->add_option("--seed", th.seed, "rng seed");
    sc_th->add_option("--stream", th.stream, "rng stream");
    sc_th->add_option("--alpha", th.alpha, "KS significance level");
    sc_th->add_option("--threads", th.threads, "0 = all cores");
    sc_th->add_option("--out", th.out, "one sample per line");
    sc_th->add_flag("--no-timestamp", th.no_timestamp, "omit the generated= line");
    sc_th->callback([&] {
        const std::vector<double> xs =
            threshold_samples(th.depth, th.samples, RngSpec{th.seed, th.stream}, th.threads);
        const KsResult ks = ks_uniformity(xs, th.alpha);
        Echo echo;
        echo.put("subcommand", "threshold-dist");
        echo.put("depth", th.depth);
        echo.put("samples", th.samples);
        echo.put("seed", th.seed);
        echo.put("stream", th.stream);
        echo.put("alpha", th.alpha);
        echo.put("ks_statistic", ks.statistic);
        echo.put("ks_threshold", ks.threshold);
        echo.put("ks_pass", std::string(ks.pass ? "true" : "false"));
        echo.stamp(th.no_timestamp);
        write_values(th.out, echo.map, xs);
        std::printf("thresholds depth=%d N=%llu: KS D=%.5g threshold=%.5g -> %s\n", th.depth,
                    static_cast<unsigned long long>(th.samples), ks.statistic, ks.threshold,
                    ks.pass ? "pass" : "FAIL");
    });

    // ---- lyapunov ---------------------------------------------------------
    auto* sc_ly = app.add_subcommand("lyapunov",
                                     "ergodic average of ln (T^-1)' along the reverse chain");
    struct {
        std::uint64_t steps = 1000000, burnin = 1000, seed = 0, stream = 0;
        double z0 = 0.5;
        std::string out = "lyapunov.csv";
        std::string format = "csv";
        bool no_timestamp = false;
        bool nats = false;
    } ly;
    sc_ly->add_option("--steps", ly.steps, "total chain steps");
    sc_ly->add_option("--burnin", ly.burnin, "discarded prefix");
    sc_ly->add_option("--z0", ly.z0, "chain start in (0,1)");
    sc_ly->add_option("--seed", ly.seed, "rng seed");
    sc_ly->add_option("--stream", ly.stream, "rng stream");
    sc_ly->add_option("--out", ly.out, "output path");
    sc_ly->add_option("--format", ly.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    sc_ly->add_flag("--no-timestamp", ly.no_timestamp, "omit the generated= line");
    sc_ly->add_flag("--nats", ly.nats, "report in nats instead of bits");
    sc_ly->callback([&] {
        const LyapunovEstimate est =
            lyapunov_estimate(ly.z0, ly.steps, ly.burnin, RngSpec{ly.seed, ly.stream});
        const double mean = ly.nats ? est.mean_nats : est.mean_bits;
        const double se = ly.nats ? est.std_error : est.std_error / std::numbers::ln2;
        Echo echo;
        echo.put("subcommand", "lyapunov");
        echo.put("steps", ly.steps);
        echo.put("burnin", ly.burnin);
        echo.put("z0", ly.z0);
        echo.put("seed", ly.seed);
        echo.put("stream", ly.stream);
        echo.put("unit", std::string(unit_name(ly.nats)));
        echo.stamp(ly.no_timestamp);
        if (ly.format == "json") {
            write_json(ly.out, nlohmann::json{{"config", echo.json()},
                                              {"samples", est.steps - est.burnin},
                                              {"mean", mean},
                                              {"std_error", se},
                                              {"mean_bits", est.mean_bits},
                                              {"mean_nats", est.mean_nats}});
        } else {
            write_csv(ly.out, echo.map, {"samples", "mean", "std_error"},
                      {{static_cast<double>(est.steps - est.burnin), mean, se}});
        }
        std::printf("lyapunov = %.6g bits = %.6g nats (+- %.3g nats, %llu steps)\n",
                    est.mean_bits, est.mean_nats, est.std_error,
                    static_cast<unsigned long long>(est.steps));
    });

    // ---- zeta / zeta-min ---------------------------------------------------
    auto* sc_z = app.add_subcommand("zeta", "supermartingale factor zeta(alpha, beta)");
    struct {
        double alpha = 0.5, beta = 0.5;
        std::string out = "zeta.json";
        bool no_timestamp = false;
        bool nats = false;
    } zt;
    sc_z->add_option("--alpha", zt.alpha, "exponent on Z")->check(CLI::NonNegativeNumber);
    sc_z->add_option("--beta", zt.beta, "exponent on 1-Z")->check(CLI::NonNegativeNumber);
    sc_z->add_option("--out", zt.out, "output JSON path");
    sc_z->add_flag("--no-timestamp", zt.no_timestamp, "omit the generated= line");
    sc_z->add_flag("--nats", zt.nats, "print the bound in nats");
    sc_z->callback([&] {
        const ZetaResult r = zeta(ZetaParams{zt.alpha, zt.beta});
        Echo echo;
        echo.put("subcommand", "zeta");
        echo.put("alpha", zt.alpha);
        echo.put("beta", zt.beta);
        echo.stamp(zt.no_timestamp);
        write_json(zt.out, nlohmann::json{{"config", echo.json()}, {"result", zeta_json(r)}});
        std::printf("zeta(%.17g, %.17g) = %.10g, bound = %.6g %s, argmax z = %.10g\n", zt.alpha,
                    zt.beta, r.zeta, bits_or_nats(r.bound_bits, zt.nats), unit_name(zt.nats),
                    r.argmax_z);
    });

    auto* sc_zm = app.add_subcommand("zeta-min", "minimize log2 zeta over (alpha, beta) >= 0");
    struct {
        double box_lo = 0.0, box_hi = 4.0;
        int starts = 16;
        std::string out = "zeta_min.json";
        bool no_timestamp = false;
        bool nats = false;
    } zm;
    sc_zm->add_option("--box-lo", zm.box_lo, "search box lower corner");
    sc_zm->add_option("--box-hi", zm.box_hi, "search box upper corner");
    sc_zm->add_option("--starts", zm.starts, "multistart count")->check(CLI::Range(1, 4096));
    sc_zm->add_option("--out", zm.out, "output JSON path");
    sc_zm->add_flag("--no-timestamp", zm.no_timestamp, "omit the generated= line");
    sc_zm->add_flag("--nats", zm.nats, "print the bound in nats");
    sc_zm->callback([&] {
        MinimizeOptions opts;
        opts.box_lo = zm.box_lo;
        opts.box_hi = zm.box_hi;
        opts.starts = zm.starts;
        const ZetaResult r = minimize_zeta(opts);
        Echo echo;
        echo.put("subcommand", "zeta-min");
        echo.put("box_lo", zm.box_lo);
        echo.put("box_hi", zm.box_hi);
        echo.put("starts", zm.starts);
        echo.stamp(zm.no_timestamp);
        write_json(zm.out, nlohmann::json{{"config", echo.json()}, {"result", zeta_json(r)}});
        std::printf("min bound = %.6g %s at alpha=%.10g beta=%.10g (zeta=%.10g, argmax z=%.6g)\n",
                    bits_or_nats(r.bound_bits, zm.nats), unit_name(zm.nats), r.params.alpha,
                    r.params.beta, r.zeta, r.argmax_z);
    });

    // ---- qn-check ------------------------------------------------------------
    auto* sc_qn = app.add_subcommand("qn-check",
                                     "Monte Carlo growth of Q_n = Z^alpha (1-Z)^beta vs zeta");
    struct {
        double alpha = 0.5, beta = 0.5, z = 0.5;
        int n = 16;
        std::uint64_t samples = 1000000, seed = 0, stream = 0;
        int threads = 0;
        std::string out = "qn_check.json";
        bool no_timestamp = false;
    } qn;
    sc_qn->add_option("--alpha", qn.alpha, "exponent on Z")->check(CLI::NonNegativeNumber);
    sc_qn->add_option("--beta", qn.beta, "exponent on 1-Z")->check(CLI::NonNegativeNumber);
    sc_qn->add_option("--z", qn.z, "start erasure probability");
    sc_qn->add_option("--n", qn.n, "depth")->check(CLI::Range(1, 100000));
    sc_qn->add_option("--samples", qn.samples, "trajectory count");
    sc_qn->add_option("--seed", qn.seed, "rng seed");
    sc_qn->add_option("--stream", qn.stream, "rng stream");
    sc_qn->add_option("--threads", qn.threads, "0 = all cores");
    sc_qn->add_option("--out", qn.out, "output JSON path");
    sc_qn->add_flag("--no-timestamp", qn.no_timestamp, "omit the generated= line");
    sc_qn->callback([&] {
        const QnGrowth g = qn_ratio_check(qn.alpha, qn.beta, qn.z, qn.n, qn.samples,
                                          RngSpec{qn.seed, qn.stream}, qn.threads);
        Echo echo;
        echo.put("subcommand", "qn-check");
        echo.put("alpha", qn.alpha);
        echo.put("beta", qn.beta);
        echo.put("z", qn.z);
        echo.put("n", qn.n);
        echo.put("samples", qn.samples);
        echo.put("seed", qn.seed);
        echo.put("stream", qn.stream);
        echo.stamp(qn.no_timestamp);
        write_json(qn.out, nlohmann::json{{"config", echo.json()}, {"result", qn_json(g)}});
        std::printf("E Q_%d = %.6g +- %.2g, growth/step = %.8g vs zeta = %.8g -> %s\n", qn.n,
                    g.mean_qn, g.std_error, g.growth, g.zeta_ref,
                    g.within_bound ? "within bound" : "VIOLATION");
    });

    // ---- construct -------------------------------------------------------------
    auto* sc_c = app.add_subcommand("construct", "BEC polar-code frozen/information sets");
    struct {
        double z = 0.5, rate = -1.0, error = -1.0;
        int n = 10;
        int threads = 0;
        std::string out = "frozen_set.json";
        std::string table_out;
        bool no_timestamp = false;
    } ct;
    sc_c->add_option("--z", ct.z, "design erasure probability")->check(CLI::Range(0.0, 1.0));
    sc_c->add_option("--n", ct.n, "depth (block length 2^n)")->check(CLI::Range(0, 24));
    auto* rate_opt = sc_c->add_option("--rate", ct.rate, "target rate in (0,1]");
    auto* err_opt = sc_c->add_option("--error", ct.error, "target union bound in (0,1)");
    rate_opt->excludes(err_opt);
    sc_c->add_option("--threads", ct.threads, "0 = all cores");
    sc_c->add_option("--out", ct.out, "frozen-set JSON path");
    sc_c->add_option("--table-out", ct.table_out, "optional CSV dump index,bhattacharyya");
    sc_c->add_flag("--no-timestamp", ct.no_timestamp, "omit the generated= line");
    sc_c->callback([&] {
        const bool have_rate = ct.rate >= 0.0;
        const bool have_error = ct.error >= 0.0;
        if (have_rate == have_error)
            throw CLI::RequiredError("construct: exactly one of --rate / --error");
        DesignOptions opts;
        opts.threads = ct.threads;
        const SubchannelTable table = enumerate_subchannels(ct.z, ct.n, opts);
        const CodeSelection sel =
            have_rate ? select_information_set(table, SelectionMode::rate, ct.rate)
                      : select_information_set(table, SelectionMode::block_error, ct.error);
        Echo echo;
        echo.put("subcommand", "construct");
        echo.put("z", ct.z);
        echo.put("n", ct.n);
        if (have_rate)
            echo.put("rate", ct.rate);
        else
            echo.put("error", ct.error);
        echo.stamp(ct.no_timestamp);
        write_json(ct.out, nlohmann::json{{"config", echo.json()},
                                          {"selection", selection_json(sel, ct.z)}});
        if (!ct.table_out.empty()) {
            std::vector<std::vector<double>> rows;
            rows.reserve(table.values.size());
            for (std::size_t i = 0; i < table.values.size(); ++i)
                rows.push_back({static_cast<double>(i), table.values[i]});
            write_csv(ct.table_out, echo.map, {"index", "bhattacharyya"}, rows);
        }
        std::printf("n=%d z=%.17g: |info|=%zu of %zu, union bound = %.6g\n", ct.n, ct.z,
                    sel.info_set.size(), table.values.size(), sel.union_bound);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse message
        if (code == 0) return 0;
        std::printf("%s\n",
                    nlohmann::json{{"error", {{"type", "usage"}, {"message", e.what()}}}}
                        .dump()
                        .c_str());
        return 2;
    }
    return 0;
}

nlohmann::json error_json(const char* type, const std::string& message) {
    return nlohmann::json{{"error", {{"type", type}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const budget_error& e) {
        std::printf("%s\n", error_json("budget", e.what()).dump().c_str());
        return 3;
    } catch (const numerical_error& e) {
        std::printf("%s\n", error_json("numerical", e.what()).dump().c_str());
        return 4;
    } catch (const std::domain_error& e) {
        std::printf("%s\n", error_json("numerical", e.what()).dump().c_str());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::printf("%s\n", error_json("usage", e.what()).dump().c_str());
        return 2;
    } catch (const std::exception& e) {
        std::printf("%s\n", error_json("internal", e.what()).dump().c_str());
        return 1;
    }
}
