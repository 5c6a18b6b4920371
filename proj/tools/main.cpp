#include <iostream>

#include <CLI11.hpp>

#include "symmkit/app/commands.hpp"

using namespace symmkit::app;

int main(int argc, char** argv) {
    CLI::App app{"symmkit: iterated Steiner, Minkowski and fiber symmetrization in the plane"};
    app.require_subcommand(1);
    app.footer("Exit codes: 0 ok, 1 internal error, 2 bad config/input/usage, 3 capacity exceeded,\n"
               "4 inconclusive verdict with require_verdict=true.\n"
               "Config keys, their defaults and the experiment list: `symmkit list`.");

    SymmetrizeArgs sym;
    auto* s = app.add_subcommand("symmetrize", "apply one symmetrization to a body file");
    s->add_option("input", sym.input, "body file (.poly polygon, .grid support grid, .pbm raster, .cloud points)")->required();
    s->add_option("--operator", sym.op, "steiner | minkowski | fiber")->capture_default_str();
    s->add_option("--angle", sym.angle_deg, "angle of the line H from the x-axis, degrees")->capture_default_str();
    s->add_option("--out", sym.output, "output body file (format follows the representation)")->required();

    RunArgs run;
    auto* r = app.add_subcommand("run", "run a process from config keys");
    r->allow_extras();
    r->add_option("--config", run.configs, "key=value config file (repeatable, later files win)");
    r->add_option("--out", run.out_dir, "artifact directory (trace.csv, trace.svg, *.svg, final body, summary.txt)");
    r->footer(defaults_help());

    RunArgs exp;
    int jobs = 1;
    auto* e = app.add_subcommand("experiment", "run a named experiment; overrides as key=value or --key value");
    e->allow_extras();
    e->add_option("name", exp.experiment, "experiment name (see `symmkit list`)")->required();
    e->add_option("--config", exp.configs, "config file; with several files and --jobs each file is a separate run");
    e->add_option("--out", exp.out_dir, "artifact directory");
    e->add_option("--jobs", jobs, "parallel runs when several --config files are given")->capture_default_str()->check(CLI::Range(1, 256));
    e->footer(defaults_help());

    PlotArgs plot;
    auto* p = app.add_subcommand("plot", "chart columns of a trace CSV as SVG");
    p->add_option("input", plot.input, "trace CSV")->required();
    p->add_option("--columns", plot.columns, "columns to chart")->delimiter(',')->capture_default_str();
    p->add_option("--title", plot.title, "chart title (default: input path)");
    p->add_option("--out", plot.output, "SVG path (default: stdout)");

    auto* l = app.add_subcommand("list", "list experiments and config defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : exit_code::usage;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (*s) return guarded(err, [&] { return cmd_symmetrize(sym, out); });
    if (*r) {
        run.overrides = r->remaining();
        return guarded(err, [&] { return cmd_run(run, out); });
    }
    if (*e) {
        exp.overrides = e->remaining();
        if (exp.configs.size() > 1) return cmd_batch(exp, jobs, out, err);
        return guarded(err, [&] { return cmd_run(exp, out); });
    }
    if (*p) return guarded(err, [&] { return cmd_plot(plot, out); });
    if (*l) {
        out << defaults_help();
        return exit_code::ok;
    }
    return exit_code::usage;
}
