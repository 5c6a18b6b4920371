#pragma once

// The CLI commands as plain functions writing to caller-supplied streams, so
// tests can drive them without spawning the binary.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "symmkit/app/registry.hpp"
#include "symmkit/svg.hpp"

namespace symmkit::app {

namespace exit_code {
constexpr int ok = 0;
constexpr int failure = 1;
constexpr int usage = 2;         // bad config, unreadable input, incompatible operator
constexpr int capacity = 3;      // a size cap was exceeded
constexpr int inconclusive = 4;  // require_verdict=true and no verdict
}  // namespace exit_code

/// Runs `f` and maps library exceptions to exit codes, printing the message.
template <class F>
int guarded(std::ostream& err, F&& f) {
    try {
        return f();
    } catch (const ConfigError& e) {
        err << "configuration errors:\n";
        for (const auto& p : e.problems()) err << "  " << p << '\n';
        return exit_code::usage;
    } catch (const IncompatibleError& e) {
        err << "incompatible: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const CapacityError& e) {
        err << "capacity exceeded: " << e.what() << '\n';
        return exit_code::capacity;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    }
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ParseError("cannot write " + p.string());
    out << text;
}

inline void print_stats(std::ostream& out, const std::string& label, const Body& b) {
    const auto s = body_stats(b);
    out << label << ": " << to_string(representation_of(b)) << " area=" << format_real(s.area)
        << " mean_width=" << format_real(s.mean_width) << " support=[" << format_real(s.min_support) << ", "
        << format_real(s.max_support) << "]\n";
}

// --- symmetrize ------------------------------------------------------------------------------

struct SymmetrizeArgs {
    std::string input, output, op = "steiner";
    double angle_deg = 0.0;  // line angle from the x-axis
};

inline int cmd_symmetrize(const SymmetrizeArgs& a, std::ostream& out) {
    const auto op = parse_operator(a.op);
    const Body in = read_body(a.input);
    require_compatible(op, representation_of(in));
    if (a.output.empty()) throw InputError("symmetrize: --out is required");
    ProcessSpec spec;
    const Body res = apply_operator(in, op, LineSubspace::line2d(a.angle_deg * std::numbers::pi / 180), spec);
    write_body(a.output, res);
    print_stats(out, "before", in);
    print_stats(out, "after", res);
    return exit_code::ok;
}

// --- run / experiment ----------------------------------------------------------------------

struct RunArgs {
    std::string experiment;               // empty: generic run
    std::vector<std::string> configs;     // applied in order
    std::vector<std::string> overrides;   // "key=value", "--key value" or "--key=value"
    std::string out_dir;                  // empty: no artifacts
};

/// Turns the leftover command-line tokens into key=value pairs.
inline std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& tokens) {
    std::vector<std::pair<std::string, std::string>> kv;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string t = tokens[i];
        const bool dashed = t.rfind("--", 0) == 0;
        if (dashed) t = t.substr(2);
        const auto eq = t.find('=');
        if (eq != std::string::npos) {
            kv.emplace_back(t.substr(0, eq), t.substr(eq + 1));
        } else if (dashed && i + 1 < tokens.size()) {
            kv.emplace_back(t, tokens[++i]);
        } else {
            throw ConfigError({"override '" + tokens[i] + "' is not key=value"});
        }
    }
    return kv;
}

inline Params make_params(const std::string& context, const Defaults& d, const RunArgs& a) {
    Params p(context, d);
    for (const auto& c : a.configs) {
        std::ifstream in(c);
        if (!in) {
            p.problem("cannot open config " + c);
            continue;
        }
        p.load(in, c);
    }
    for (const auto& [k, v] : parse_overrides(a.overrides)) p.set(k, v, "command line");
    return p;
}

inline std::string verdict_line(const ExperimentResult& r) {
    return std::string("VERDICT: ") + to_string(r.verdict) + " " + r.metric;
}

/// Prints the report and writes artifacts into `out_dir` (if set): trace.csv,
/// trace.svg, one svg per figure, the final body and summary.txt.
inline int finish(const std::string& title, const Params& p, const ExperimentResult& r, const std::string& out_dir,
                  std::ostream& out) {
    std::ostringstream rep;
    rep << title << '\n';
    for (const auto& n : r.notes) rep << "  " << n << '\n';
    rep << verdict_line(r) << '\n';
    out << rep.str();
    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        const fs::path d(out_dir);
        std::ostringstream summary;
        summary << rep.str() << "parameters:\n";
        for (const auto& [k, v] : p.values()) summary << "  " << k << '=' << v << '\n';
        write_file(d / "summary.txt", summary.str());
        if (r.trace) {
            std::ostringstream csv;
            write_trace_csv(csv, *r.trace);
            write_file(d / "trace.csv", csv.str());
            std::istringstream back(csv.str());
            write_file(d / "trace.svg", trace_chart_svg(read_trace_csv(back), {"dh_prev", "area", "mean_width"}, title));
            write_body((d / ("final" + body_extension(r.trace->last()))).string(), r.trace->last());
        }
        double half = 0;
        for (const auto& [name, b] : r.figures) half = std::max(half, 1.1 * svg::body_extent(b));
        for (const auto& [name, b] : r.figures) write_file(d / (name + ".svg"), body_svg(b, title + ": " + name, half));
    }
    if (r.require_verdict && r.verdict == Verdict::inconclusive) return exit_code::inconclusive;
    return exit_code::ok;
}

inline int cmd_run(const RunArgs& a, std::ostream& out) {
    if (a.experiment.empty()) {
        Params p = make_params("run", run_defaults(), a);
        const auto r = run_generic(p);
        return finish("run", p, r, a.out_dir, out);
    }
    const Experiment* e = find_experiment(a.experiment);
    if (!e) {
        std::string names;
        for (const auto& x : experiments()) names += (names.empty() ? "" : ", ") + x.name;
        throw ConfigError({"unknown experiment '" + a.experiment + "' (known: " + names + ")"});
    }
    Params p = make_params("experiment " + e->name, e->defaults, a);
    const auto r = e->run(p);
    return finish("experiment " + e->name, p, r, a.out_dir, out);
}

/// One run per config file, `jobs` at a time. Each writes into
/// <out_dir>/<config stem>/ and output is printed in config order.
inline int cmd_batch(const RunArgs& a, int jobs, std::ostream& out, std::ostream& err) {
    const std::size_t n = a.configs.size();
    std::vector<std::string> outs(n), errs(n);
    std::vector<int> codes(n, exit_code::ok);
    auto one = [&](std::size_t i) {
        RunArgs b = a;
        b.configs = {a.configs[i]};
        if (!a.out_dir.empty()) b.out_dir = (std::filesystem::path(a.out_dir) / std::filesystem::path(a.configs[i]).stem()).string();
        std::ostringstream o, e;
        codes[i] = guarded(e, [&] { return cmd_run(b, o); });
        outs[i] = o.str();
        errs[i] = e.str();
    };
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex mu;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = 0;
                {
                    std::lock_guard lock(mu);
                    if (next == n) return;
                    i = next++;
                }
                one(i);
            }
        });
    for (auto& t : pool) t.join();
    int code = exit_code::ok;
    for (std::size_t i = 0; i < n; ++i) {
        out << "== " << a.configs[i] << '\n' << outs[i];
        err << errs[i];
        code = std::max(code, codes[i]);
    }
    return code;
}

// --- plot ---------------------------------------------------------------------------------

struct PlotArgs {
    std::string input, output, title;
    std::vector<std::string> columns{"dh_prev", "area", "mean_width"};
};

inline int cmd_plot(const PlotArgs& a, std::ostream& out) {
    std::ifstream in(a.input);
    if (!in) throw ParseError("cannot open " + a.input);
    std::vector<std::string> need{"step"};
    need.insert(need.end(), a.columns.begin(), a.columns.end());
    const auto table = read_trace_csv(in, need, a.input);
    const auto svg = trace_chart_svg(table, a.columns, a.title.empty() ? a.input : a.title);
    if (a.output.empty())
        out << svg;
    else
        write_file(a.output, svg);
    return exit_code::ok;
}

// --- help text ----------------------------------------------------------------------------

inline std::string defaults_help() {
    std::ostringstream o;
    o << "Config keys (key=value in --config files or as overrides) and their defaults:\n";
    const auto base = run_defaults();
    for (const auto& [k, v] : base) o << "  " << k << '=' << (v.empty() ? "\"\"" : v) << '\n';
    o << "\nExperiments (keys that differ from the defaults above, plus extra keys):\n";
    for (const auto& e : experiments()) {
        o << "  " << e.name << ": " << e.summary << "\n   ";
        for (const auto& [k, v] : e.defaults) {
            bool same = false;
            for (const auto& [bk, bv] : base) same = same || (bk == k && bv == v);
            if (!same) o << ' ' << k << '=' << v;
        }
        o << '\n';
    }
    return o.str();
}

}  // namespace symmkit::app
