// Command-line front end: file ingestion, command dispatch, JSON/CSV output,
// benchmark sweeps, deterministic seeding. Talks to the library exclusively
// through the C interface in geomk.h.

#include "geomk.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

const char* kUsage =
    "usage: geomk <command> [flags]\n"
    "\n"
    "commands:\n"
    "  kernel    --input PTS --eps E [--rounds K] [--out subset.csv] [--stats stats.json]\n"
    "  diameter  --input PTS --eps E [--verify] [--out out.json]\n"
    "  width     --input PTS --eps E --dirs DIRS [--verify] [--out out.json]\n"
    "  bcp       --red PTS --blue PTS --eps E [--seed N] [--verify] [--out out.json]\n"
    "  apm build --halfspaces HS --eps E [--rounds K] --out index.apmx\n"
    "  apm query --index index.apmx --points PTS [--out verdicts.csv]\n"
    "  bench     --suite scaling --d D [--n N] [--seed N] [--eps E1,E2,...] [--out out.csv]\n"
    "  selftest\n"
    "  gen       --shape {ball,sphere,ellipsoid,cube} --n N --d D [--seed N] [--out PTS]\n"
    "\n"
    "common flags: --threads N (workers for parallel steps; results are\n"
    "independent of it), --seed N (default 0). Set GEOMK_LOG to error, info,\n"
    "or debug for diagnostics on stderr.\n";

int usage_error(const std::string& msg) {
    if (!msg.empty()) std::cerr << "error: " << msg << "\n\n";
    std::cerr << kUsage;
    return 1;
}

[[noreturn]] void die(geomk_status st) {
    std::cerr << "error: " << geomk_last_error() << "\n";
    std::exit(st == GEOMK_ERR_INTERNAL ? 2 : 1);
}

geomk_status check(geomk_status st) {
    if (st != GEOMK_OK) die(st);
    return st;
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch())
        .count();
}

std::string fmt_num(double x) {
    char buf[64];
    if (x == static_cast<int64_t>(x) && std::fabs(x) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(x));
        return buf;
    }
    // shortest representation that round-trips
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

// Minimal ordered JSON object writer; values are pre-rendered fragments.
class Json {
public:
    Json() { out_ << "{\"schema\":1"; }
    Json& field(const std::string& key, const std::string& raw) {
        out_ << ",\"" << key << "\":" << raw;
        return *this;
    }
    Json& num(const std::string& key, double v) { return field(key, fmt_num(v)); }
    Json& str(const std::string& key, const std::string& v) {
        return field(key, "\"" + v + "\"");
    }
    std::string done() { return out_.str() + "}\n"; }

private:
    std::ostringstream out_;
};

std::string json_pair(int32_t i, int32_t j) {
    return "[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

std::string json_array(const std::vector<double>& xs) {
    std::string s = "[";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += fmt_num(xs[i]);
    }
    return s + "]";
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot write " << out_path << "\n";
        std::exit(1);
    }
    f << text;
}

// ---------------------------------------------------------------------------
// Flag parsing
// ---------------------------------------------------------------------------

struct RunConfig {
    std::string command;
    std::string sub;  // apm build|query
    std::string input, red, blue, halfspaces, index, points, dirs, shape, suite;
    std::string out, stats;
    std::string eps_list;  // bench
    double eps = -1;
    int rounds = -1;
    uint64_t seed = 0;
    bool verify = false;
    int threads = 0;
    int n = 0;
    int d = 0;
};

// Returns nullopt on a parse problem after printing usage.
std::optional<RunConfig> parse_flags(int argc, char** argv, int start, RunConfig cfg) {
    auto need = [&](int i) -> const char* {
        if (i + 1 >= argc) return nullptr;
        return argv[i + 1];
    };
    for (int i = start; i < argc; i += 2) {
        std::string f = argv[i];
        if (f == "--verify") {
            cfg.verify = true;
            --i;  // no value
            continue;
        }
        const char* v = need(i);
        if (!v) {
            usage_error("flag " + f + " needs a value");
            return std::nullopt;
        }
        try {
            if (f == "--input") cfg.input = v;
            else if (f == "--red") cfg.red = v;
            else if (f == "--blue") cfg.blue = v;
            else if (f == "--halfspaces") cfg.halfspaces = v;
            else if (f == "--index") cfg.index = v;
            else if (f == "--points") cfg.points = v;
            else if (f == "--dirs") cfg.dirs = v;
            else if (f == "--shape") cfg.shape = v;
            else if (f == "--suite") cfg.suite = v;
            else if (f == "--out") cfg.out = v;
            else if (f == "--stats") cfg.stats = v;
            else if (f == "--eps") { cfg.eps_list = v; cfg.eps = std::stod(v); }
            else if (f == "--rounds") cfg.rounds = std::stoi(v);
            else if (f == "--seed") cfg.seed = std::stoull(v);
            else if (f == "--threads") cfg.threads = std::stoi(v);
            else if (f == "--n") cfg.n = std::stoi(v);
            else if (f == "--d") cfg.d = std::stoi(v);
            else {
                usage_error("unknown flag " + f);
                return std::nullopt;
            }
        } catch (const std::exception&) {
            // --eps may be a list (bench); other numeric parses must succeed
            if (f == "--eps") {
                cfg.eps_list = v;
                cfg.eps = -1;
            } else {
                usage_error("bad value for " + f + ": " + v);
                return std::nullopt;
            }
        }
    }
    if (cfg.threads < 0) {
        usage_error("--threads must be >= 1");
        return std::nullopt;
    }
    return cfg;
}

bool require_eps(const RunConfig& cfg) {
    if (cfg.eps <= 0 || cfg.eps >= 1) {
        usage_error("--eps must be in (0,1)");
        return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Handle wrappers (RAII for the C handles)
// ---------------------------------------------------------------------------

using PointsPtr = std::unique_ptr<geomk_points, decltype(&geomk_points_free)>;
using PolyPtr = std::unique_ptr<geomk_poly, decltype(&geomk_poly_free)>;
using ApmPtr = std::unique_ptr<geomk_apm, decltype(&geomk_apm_free)>;
using WidthPtr = std::unique_ptr<geomk_width, decltype(&geomk_width_free)>;

PointsPtr load_points(const std::string& path) {
    geomk_points* p = nullptr;
    check(geomk_points_read(path.c_str(), &p));
    return PointsPtr(p, geomk_points_free);
}

PointsPtr make_points(int d, const std::vector<double>& xs) {
    geomk_points* p = nullptr;
    check(geomk_points_create(d, xs.data(), xs.size() / static_cast<size_t>(d), &p));
    return PointsPtr(p, geomk_points_free);
}

// ---------------------------------------------------------------------------
// Fixture generator
// ---------------------------------------------------------------------------

std::vector<double> gen_shape(const std::string& shape, int n, int d, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0, 1);
    std::uniform_real_distribution<double> u01(0, 1);
    std::uniform_real_distribution<double> u11(-1, 1);
    std::vector<double> xs;
    xs.reserve(static_cast<size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        if (shape == "cube") {
            for (int j = 0; j < d; ++j) xs.push_back(u11(rng));
            continue;
        }
        std::vector<double> v(d);
        double norm2 = 0;
        do {
            norm2 = 0;
            for (int j = 0; j < d; ++j) {
                v[j] = g(rng);
                norm2 += v[j] * v[j];
            }
        } while (norm2 < 1e-300);
        double inv = 1.0 / std::sqrt(norm2);
        double radial = 1.0;
        if (shape == "ball") radial = std::pow(u01(rng), 1.0 / d);
        for (int j = 0; j < d; ++j) {
            double axis = (shape == "ellipsoid") ? std::pow(0.6, j) : 1.0;
            xs.push_back(v[j] * inv * radial * axis);
        }
    }
    return xs;
}

std::string points_text(int d, const std::vector<double>& xs) {
    std::ostringstream out;
    const size_t n = xs.size() / static_cast<size_t>(d);
    for (size_t i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            if (j) out << " ";
            out << fmt_num(xs[i * static_cast<size_t>(d) + j]);
        }
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_kernel(const RunConfig& cfg) {
    if (cfg.input.empty()) return usage_error("kernel needs --input");
    if (!require_eps(cfg)) return 1;
    auto pts = load_points(cfg.input);
    int32_t* idx = nullptr;
    size_t n = 0;
    geomk_kernel_stats st;
    double t0 = now_ms();
    check(geomk_kernel_stats_run(pts.get(), cfg.eps, cfg.rounds, &idx, &n, &st));
    double build_ms = now_ms() - t0;
    std::unique_ptr<int32_t[], decltype(&geomk_indices_free)> guard(idx,
                                                                    geomk_indices_free);

    std::string indices = "[";
    for (size_t i = 0; i < n; ++i) {
        if (i) indices += ",";
        indices += std::to_string(idx[i]);
    }
    indices += "]";

    Json j;
    j.str("command", "kernel")
        .num("input_size", static_cast<double>(geomk_points_size(pts.get())))
        .num("size", static_cast<double>(n))
        .field("indices", indices)
        .field("timings", "{\"build_ms\":" + fmt_num(build_ms) + "}");
    std::cout << j.done();

    if (!cfg.out.empty()) {
        std::string csv = "index\n";
        for (size_t i = 0; i < n; ++i) csv += std::to_string(idx[i]) + "\n";
        emit(csv, cfg.out);
    }
    if (!cfg.stats.empty()) {
        std::vector<double> deltas(st.delta_schedule,
                                   st.delta_schedule + st.delta_count);
        Json s;
        s.str("command", "kernel_stats")
            .num("input_size", static_cast<double>(st.input_size))
            .num("size", static_cast<double>(n))
            .num("discarded", static_cast<double>(st.discarded))
            .num("leaves", static_cast<double>(st.leaves))
            .num("rounds_used", st.rounds_used)
            .field("delta_schedule", json_array(deltas))
            .field("timings", "{\"build_ms\":" + fmt_num(build_ms) + "}");
        emit(s.done(), cfg.stats);
    }
    return 0;
}

int cmd_diameter(const RunConfig& cfg) {
    if (cfg.input.empty()) return usage_error("diameter needs --input");
    if (!require_eps(cfg)) return 1;
    auto pts = load_points(cfg.input);
    int32_t i, j;
    double dist;
    double t0 = now_ms();
    check(geomk_diameter(pts.get(), cfg.eps, &i, &j, &dist));
    double ms = now_ms() - t0;

    Json out;
    out.str("command", "diameter").num("value", dist).field("pair", json_pair(i, j));
    if (cfg.verify) {
        int32_t ei, ej;
        double ex;
        check(geomk_exact_diameter(pts.get(), &ei, &ej, &ex));
        out.num("exact", ex).num("ratio", ex > 0 ? dist / ex : 1.0);
    }
    out.field("timings", "{\"total_ms\":" + fmt_num(ms) + "}");
    emit(out.done(), cfg.out);
    return 0;
}

int cmd_width(const RunConfig& cfg) {
    if (cfg.input.empty()) return usage_error("width needs --input");
    if (cfg.dirs.empty()) return usage_error("width needs --dirs");
    if (!require_eps(cfg)) return 1;
    auto pts = load_points(cfg.input);
    auto dirs = load_points(cfg.dirs);
    if (geomk_points_dim(dirs.get()) != geomk_points_dim(pts.get()))
        return usage_error("direction dimension does not match the point set");

    geomk_width* w = nullptr;
    double t0 = now_ms();
    check(geomk_width_build(pts.get(), cfg.eps, &w));
    double build_ms = now_ms() - t0;
    WidthPtr guard(w, geomk_width_free);

    const int d = geomk_points_dim(pts.get());
    std::vector<double> v(d), values, exacts;
    double worst = 1.0;
    t0 = now_ms();
    for (size_t k = 0; k < geomk_points_size(dirs.get()); ++k) {
        check(geomk_points_get(dirs.get(), k, v.data()));
        double val;
        check(geomk_width_query(w, v.data(), &val));
        values.push_back(val);
        if (cfg.verify) {
            double ex;
            check(geomk_exact_width(pts.get(), v.data(), &ex));
            exacts.push_back(ex);
            if (ex > 0 && std::fabs(std::log(val / ex)) > std::fabs(std::log(worst)))
                worst = val / ex;
        }
    }
    double query_ms = now_ms() - t0;

    Json out;
    out.str("command", "width").field("value", json_array(values));
    if (cfg.verify) out.field("exact", json_array(exacts)).num("ratio", worst);
    out.field("timings", "{\"build_ms\":" + fmt_num(build_ms) +
                             ",\"query_ms\":" + fmt_num(query_ms) + "}");
    emit(out.done(), cfg.out);
    return 0;
}

int cmd_bcp(const RunConfig& cfg) {
    if (cfg.red.empty() || cfg.blue.empty()) return usage_error("bcp needs --red and --blue");
    if (!require_eps(cfg)) return 1;
    auto red = load_points(cfg.red);
    auto blue = load_points(cfg.blue);
    int32_t i, j;
    double dist, est;
    double t0 = now_ms();
    check(geomk_bcp(red.get(), blue.get(), cfg.eps, cfg.seed, &i, &j, &dist, &est));
    double ms = now_ms() - t0;

    Json out;
    out.str("command", "bcp")
        .num("value", dist)
        .field("pair", json_pair(i, j))
        .num("estimate", est);
    if (cfg.verify) {
        int32_t ei, ej;
        double ex;
        check(geomk_exact_bcp(red.get(), blue.get(), &ei, &ej, &ex));
        out.num("exact", ex).num("ratio", ex > 0 ? dist / ex : 1.0);
    }
    out.field("timings", "{\"total_ms\":" + fmt_num(ms) + "}");
    emit(out.done(), cfg.out);
    return 0;
}

int cmd_apm(const RunConfig& cfg) {
    if (cfg.sub == "build") {
        if (cfg.halfspaces.empty()) return usage_error("apm build needs --halfspaces");
        if (cfg.out.empty()) return usage_error("apm build needs --out");
        if (!require_eps(cfg)) return 1;
        geomk_poly* p = nullptr;
        check(geomk_poly_read(cfg.halfspaces.c_str(), &p));
        PolyPtr pguard(p, geomk_poly_free);
        geomk_apm* apm = nullptr;
        double t0 = now_ms();
        check(geomk_apm_build(p, cfg.eps, cfg.rounds < 0 ? 1 : cfg.rounds, &apm));
        double ms = now_ms() - t0;
        ApmPtr aguard(apm, geomk_apm_free);
        check(geomk_apm_save(apm, cfg.out.c_str()));
        uint64_t nodes = 0, subs = 0;
        int rounds = 0;
        double eps = 0;
        geomk_apm_stats(apm, &nodes, &subs, &rounds, &eps);
        Json out;
        out.str("command", "apm_build")
            .num("faces", static_cast<double>(geomk_poly_size(p)))
            .num("nodes", static_cast<double>(nodes))
            .num("sub_indices", static_cast<double>(subs))
            .num("rounds", rounds)
            .str("index", cfg.out)
            .field("timings", "{\"build_ms\":" + fmt_num(ms) + "}");
        std::cout << out.done();
        return 0;
    }
    if (cfg.sub == "query") {
        if (cfg.index.empty() || cfg.points.empty())
            return usage_error("apm query needs --index and --points");
        geomk_apm* apm = nullptr;
        check(geomk_apm_load(cfg.index.c_str(), &apm));
        ApmPtr guard(apm, geomk_apm_free);
        auto pts = load_points(cfg.points);
        if (geomk_points_dim(pts.get()) != geomk_apm_dim(apm))
            return usage_error("query dimension does not match the index");
        const int d = geomk_apm_dim(apm);
        std::vector<double> q(d);
        std::string csv = "index,inside,path_length\n";
        size_t inside_count = 0;
        double t0 = now_ms();
        for (size_t k = 0; k < geomk_points_size(pts.get()); ++k) {
            check(geomk_points_get(pts.get(), k, q.data()));
            int inside = 0, path = 0;
            check(geomk_apm_query(apm, q.data(), &inside, &path));
            inside_count += inside != 0;
            csv += std::to_string(k) + "," + std::to_string(inside) + "," +
                   std::to_string(path) + "\n";
        }
        double ms = now_ms() - t0;
        emit(csv, cfg.out);
        Json out;
        out.str("command", "apm_query")
            .num("queries", static_cast<double>(geomk_points_size(pts.get())))
            .num("inside", static_cast<double>(inside_count))
            .field("timings", "{\"query_ms\":" + fmt_num(ms) + "}");
        std::cout << out.done();
        return 0;
    }
    return usage_error("apm needs a subcommand: build or query");
}

int cmd_gen(const RunConfig& cfg) {
    static const char* shapes[] = {"ball", "sphere", "ellipsoid", "cube"};
    bool ok = false;
    for (const char* s : shapes) ok = ok || cfg.shape == s;
    if (!ok) return usage_error("gen needs --shape in {ball,sphere,ellipsoid,cube}");
    if (cfg.n <= 0 || cfg.d <= 0) return usage_error("gen needs --n and --d positive");
    auto xs = gen_shape(cfg.shape, cfg.n, cfg.d, cfg.seed);
    emit(points_text(cfg.d, xs), cfg.out);
    return 0;
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

int cmd_bench(const RunConfig& cfg) {
    if (cfg.suite != "scaling") return usage_error("bench needs --suite scaling");
    int d = cfg.d > 0 ? cfg.d : 3;
    int n = cfg.n > 0 ? cfg.n : 10000;
    std::vector<double> eps_list = {0.4, 0.2, 0.1, 0.05};
    if (!cfg.eps_list.empty()) {
        try {
            eps_list = parse_eps_list(cfg.eps_list);
        } catch (const std::exception&) {
            return usage_error("bad --eps list: " + cfg.eps_list);
        }
    }
    for (double e : eps_list)
        if (e <= 0 || e >= 1) return usage_error("--eps entries must be in (0,1)");

    auto xs = gen_shape("ball", n, d, cfg.seed);
    auto pts = make_points(d, xs);

    // width-ratio min over a fixed direction bundle, from the same seed
    const int ndirs = 100;
    auto dirxs = gen_shape("sphere", ndirs, d, cfg.seed + 1);

    std::vector<double> logs_x, logs_y;
    std::string csv = "eps,kernel_size,build_ms,width_ratio_min,slope\n";
    std::vector<std::string> rows;
    for (double e : eps_list) {
        int32_t* idx = nullptr;
        size_t kn = 0;
        double t0 = now_ms();
        check(geomk_kernel(pts.get(), e, cfg.rounds, &idx, &kn));
        double ms = now_ms() - t0;
        std::unique_ptr<int32_t[], decltype(&geomk_indices_free)> guard(
            idx, geomk_indices_free);

        std::vector<double> sub;
        for (size_t i = 0; i < kn; ++i)
            for (int jj = 0; jj < d; ++jj)
                sub.push_back(xs[static_cast<size_t>(idx[i]) * d + jj]);
        auto kpts = make_points(d, sub);
        double ratio_min = 1.0;
        std::vector<double> v(d);
        for (int k = 0; k < ndirs; ++k) {
            for (int jj = 0; jj < d; ++jj) v[jj] = dirxs[static_cast<size_t>(k) * d + jj];
            double wf = 0, wk = 0;
            check(geomk_exact_width(pts.get(), v.data(), &wf));
            check(geomk_exact_width(kpts.get(), v.data(), &wk));
            if (wf > 0) ratio_min = std::min(ratio_min, wk / wf);
        }
        logs_x.push_back(std::log(1.0 / e));
        logs_y.push_back(std::log(static_cast<double>(kn)));
        rows.push_back(fmt_num(e) + "," + std::to_string(kn) + "," + fmt_num(ms) + "," +
                       fmt_num(ratio_min));
    }

    // least-squares slope of log(size) vs log(1/eps); undefined for one point
    std::string slope = "";
    double slope_val = 0;
    bool has_slope = logs_x.size() >= 2;
    if (has_slope) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < logs_x.size(); ++i) {
            mx += logs_x[i];
            my += logs_y[i];
        }
        mx /= logs_x.size();
        my /= logs_y.size();
        double num = 0, den = 0;
        for (size_t i = 0; i < logs_x.size(); ++i) {
            num += (logs_x[i] - mx) * (logs_y[i] - my);
            den += (logs_x[i] - mx) * (logs_x[i] - mx);
        }
        slope_val = den > 0 ? num / den : 0;
        slope = fmt_num(slope_val);
    }
    for (const auto& r : rows) csv += r + "," + slope + "\n";
    emit(csv, cfg.out);
    if (!cfg.out.empty()) {
        Json out;
        out.str("command", "bench")
            .str("suite", "scaling")
            .num("d", d)
            .num("n", n)
            .field("slope", has_slope ? fmt_num(slope_val) : "null");
        std::cout << out.done();
    }
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    int checks = 0;
    auto expect = [&](bool ok, const char* what) {
        ++checks;
        if (!ok) {
            std::cerr << "selftest failure: " << what << "\n";
            std::exit(2);
        }
    };
    const int d = 2, n = 600;
    auto xs = gen_shape("ball", n, d, cfg.seed);
    auto pts = make_points(d, xs);

    // kernel preserves widths
    int32_t* idx = nullptr;
    size_t kn = 0;
    check(geomk_kernel(pts.get(), 0.2, -1, &idx, &kn));
    std::unique_ptr<int32_t[], decltype(&geomk_indices_free)> guard(idx,
                                                                    geomk_indices_free);
    std::vector<double> sub;
    for (size_t i = 0; i < kn; ++i)
        for (int jj = 0; jj < d; ++jj)
            sub.push_back(xs[static_cast<size_t>(idx[i]) * d + jj]);
    auto kpts = make_points(d, sub);
    auto dirxs = gen_shape("sphere", 64, d, cfg.seed + 1);
    std::vector<double> v(d);
    for (int k = 0; k < 64; ++k) {
        for (int jj = 0; jj < d; ++jj) v[jj] = dirxs[static_cast<size_t>(k) * d + jj];
        double wf = 0, wk = 0;
        check(geomk_exact_width(pts.get(), v.data(), &wf));
        check(geomk_exact_width(kpts.get(), v.data(), &wk));
        expect(wk >= (1 - 0.2) * wf && wk <= wf + 1e-12, "kernel width bound");
    }

    // diameter against the exact reference
    int32_t i1, j1, i2, j2;
    double dist, ex;
    check(geomk_diameter(pts.get(), 0.1, &i1, &j1, &dist));
    check(geomk_exact_diameter(pts.get(), &i2, &j2, &ex));
    expect(dist <= ex + 1e-12 && dist >= 0.9 * ex, "diameter ratio");

    // bcp against the exact reference
    auto ys = gen_shape("ball", n, d, cfg.seed + 2);
    auto blue = make_points(d, ys);
    double est;
    check(geomk_bcp(pts.get(), blue.get(), 0.1, cfg.seed, &i1, &j1, &dist, &est));
    check(geomk_exact_bcp(pts.get(), blue.get(), &i2, &j2, &ex));
    expect(dist >= ex - 1e-12 && dist <= 1.1 * ex, "bcp ratio");
    expect(est >= ex - 1e-12 && est < 2 * ex, "bcp estimate");

    // membership on a simple polytope
    std::vector<double> rows;
    for (int t = 0; t < 6; ++t) {
        double ang = 2 * M_PI * t / 6;
        rows.push_back(std::cos(ang));
        rows.push_back(std::sin(ang));
        rows.push_back(0.6);
    }
    geomk_poly* p = nullptr;
    check(geomk_poly_create(2, rows.data(), 6, 1, &p));
    PolyPtr pguard(p, geomk_poly_free);
    geomk_apm* apm = nullptr;
    check(geomk_apm_build(p, 0.1, 1, &apm));
    ApmPtr aguard(apm, geomk_apm_free);
    double origin[2] = {0, 0}, far_out[2] = {4, 4};
    int inside = 0, path = 0;
    check(geomk_apm_query(apm, origin, &inside, &path));
    expect(inside == 1, "origin inside");
    check(geomk_apm_query(apm, far_out, &inside, &path));
    expect(inside == 0, "far point outside");

    Json out;
    out.str("command", "selftest").str("status", "pass").num("checks", checks);
    std::cout << out.done();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage_error("");
    std::string cmd = argv[1];
    RunConfig base;
    base.command = cmd;
    int start = 2;
    if (cmd == "apm") {
        if (argc < 3) return usage_error("apm needs a subcommand: build or query");
        base.sub = argv[2];
        start = 3;
    }
    auto parsed = parse_flags(argc, argv, start, base);
    if (!parsed) return 1;
    RunConfig cfg = *parsed;
    geomk_set_threads(cfg.threads);

    try {
        if (cmd == "kernel") return cmd_kernel(cfg);
        if (cmd == "diameter") return cmd_diameter(cfg);
        if (cmd == "width") return cmd_width(cfg);
        if (cmd == "bcp") return cmd_bcp(cfg);
        if (cmd == "apm") return cmd_apm(cfg);
        if (cmd == "bench") return cmd_bench(cfg);
        if (cmd == "selftest") return cmd_selftest(cfg);
        if (cmd == "gen") return cmd_gen(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return usage_error("unknown command " + cmd);
}
