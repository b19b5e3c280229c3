#include "imc/io.hpp"

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "imc/errors.hpp"
#include "imc/oracle.hpp"
#include "imc/witness.hpp"

namespace imc {

namespace {

using nlohmann::json;

std::vector<double> parse_number_list(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw ParseError(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

RowCredalSet parse_row(const json& spec, const std::string& label) {
    if (!spec.is_object())
        throw ParseError("row '" + label + "': expected an object");
    if (spec.contains("vertices")) {
        const auto& arr = spec.at("vertices");
        if (!arr.is_array() || arr.empty())
            throw ParseError("row '" + label + "': vertices must be a non-empty array");
        VertexListRow row;
        for (const auto& v : arr)
            row.vertices.push_back(ProbabilityRow{parse_number_list(v, "row '" + label + "'")});
        return row;
    }
    if (spec.contains("intervals")) {
        const auto& iv = spec.at("intervals");
        if (!iv.is_object() || !iv.contains("lower") || !iv.contains("upper"))
            throw ParseError("row '" + label + "': intervals need lower and upper arrays");
        IntervalBoundsRow row;
        row.lower = parse_number_list(iv.at("lower"), "row '" + label + "' lower");
        row.upper = parse_number_list(iv.at("upper"), "row '" + label + "' upper");
        return row;
    }
    throw ParseError("row '" + label + "': expected either vertices or intervals");
}

json row_to_json(const RowCredalSet& row) {
    json out;
    if (const auto* vl = std::get_if<VertexListRow>(&row)) {
        json verts = json::array();
        for (const auto& v : vl->vertices) verts.push_back(v.mass);
        out["vertices"] = std::move(verts);
    } else {
        const auto& iv = std::get<IntervalBoundsRow>(row);
        out["intervals"] = {{"lower", iv.lower}, {"upper", iv.upper}};
    }
    return out;
}

json ext_to_json(const ExtValue& v) {
    if (v.is_infinite()) return "inf";
    return v.finite();
}

std::vector<std::string> labels_of(const StateSpace& states, const std::vector<int>& indices) {
    std::vector<std::string> out;
    out.reserve(indices.size());
    for (int x : indices) out.push_back(states.labels[x]);
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os) throw IoError("write to '" + path.string() + "' failed");
}

std::string format_value(const ExtValue& v) {
    if (v.is_infinite()) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v.finite());
    return buf;
}

}  // namespace

ParsedModel parse_model_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("model: expected a JSON object");
    if (!doc.contains("states") || !doc.at("states").is_array())
        throw ParseError("model: missing states array");

    StateSpace states;
    for (const auto& s : doc.at("states")) {
        if (!s.is_string()) throw ParseError("model: state labels must be strings");
        states.labels.push_back(s.get<std::string>());
    }

    std::vector<std::string> target;
    if (doc.contains("target")) {
        if (!doc.at("target").is_array()) throw ParseError("model: target must be an array");
        for (const auto& s : doc.at("target")) {
            if (!s.is_string()) throw ParseError("model: target labels must be strings");
            target.push_back(s.get<std::string>());
        }
    }

    if (!doc.contains("rows") || !doc.at("rows").is_object())
        throw ParseError("model: missing rows object");
    std::vector<RowCredalSet> rows;
    rows.reserve(states.labels.size());
    for (const auto& label : states.labels) {
        if (!doc.at("rows").contains(label))
            throw ParseError("model: no row for state '" + label + "'");
        rows.push_back(parse_row(doc.at("rows").at(label), label));
    }

    auto result = validate_chain(states, target, rows);
    if (!result.ok()) throw ValidationError(describe(result.violations));

    ParsedModel out;
    out.chain = std::move(*result.chain);
    out.target = std::move(*result.target);
    out.digest = canonical_digest(model_to_json(out.chain, out.target));
    return out;
}

ParsedModel parse_model(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open model file '" + path.string() + "'");
    json doc;
    try {
        is >> doc;
    } catch (const json::exception& e) {
        throw ParseError("model file '" + path.string() + "': " + e.what());
    }
    return parse_model_json(doc);
}

json model_to_json(const ImpreciseChain& chain, const TargetSet& target) {
    json rows = json::object();
    for (int x = 0; x < chain.size(); ++x)
        rows[chain.states.labels[x]] = row_to_json(chain.rows[x]);
    return json{{"states", chain.states.labels},
                {"target", labels_of(chain.states, target.members())},
                {"rows", std::move(rows)}};
}

std::string canonical_digest(const json& doc) {
    const std::string dump = doc.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json values_to_json(const StateSpace& states, const ExtVector& values) {
    json out = json::object();
    for (int x = 0; x < states.size(); ++x) out[states.labels[x]] = ext_to_json(values[x]);
    return out;
}

json classification_to_json(const StateSpace& states, const ClassificationReport& report) {
    return json{{"B", labels_of(states, report.B)},
                {"U", labels_of(states, report.U)},
                {"Z", labels_of(states, report.Z)},
                {"C", labels_of(states, report.C)},
                {"lower_finite_region", labels_of(states, report.lower_finite_region)}};
}

json matrix_to_json(const TransitionMatrix& T) {
    json rows = json::array();
    for (const auto& r : T.rows) rows.push_back(r.mass);
    return json{{"rows", std::move(rows)}};
}

void emit_trace(const IterationTrace& trace, const StateSpace& states,
                const std::filesystem::path& path) {
    std::ostringstream os;
    os << "iteration,state,value,delta,residual\n";
    const TraceSnapshot* prev = nullptr;
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const TraceSnapshot& snap = trace.snapshots[i];
        if (snap.values.empty()) {
            prev = nullptr;
            continue;
        }
        const TraceSnapshot* next =
            i + 1 < trace.snapshots.size() && !trace.snapshots[i + 1].values.empty()
                ? &trace.snapshots[i + 1]
                : nullptr;
        for (int x = 0; x < states.size(); ++x) {
            double delta = snap.max_delta;
            if (prev && prev->values[x].is_finite() && snap.values[x].is_finite())
                delta = snap.values[x].finite() - prev->values[x].finite();
            double residual = snap.residual;
            if (next && next->values[x].is_finite() && snap.values[x].is_finite())
                residual = std::abs(next->values[x].finite() - snap.values[x].finite());
            os << snap.iteration << ',' << states.labels[x] << ','
               << format_value(snap.values[x]) << ',' << format_value(ExtValue(delta)) << ','
               << format_value(ExtValue(residual)) << '\n';
        }
        prev = &snap;
    }
    write_text(path, os.str());
}

namespace {

json witness_to_json(const WitnessVariant& witness, const StateSpace& states) {
    if (const auto* matrix = std::get_if<TransitionMatrix>(&witness)) {
        json out = matrix_to_json(*matrix);
        out["type"] = "matrix";
        return out;
    }
    const auto& lw = std::get<LambdaWitness>(witness);
    json out = matrix_to_json(lw.matrix);
    out["type"] = "lambda";
    out["lambda"] = lw.lambda;
    for (int x = 0; x < states.size(); ++x) out["achieved"][states.labels[x]] = lw.achieved[x];
    return out;
}

struct CommandContext {
    std::string model_path;
    std::string out_path;  // empty = stdout
};

void deliver(const CommandContext& ctx, const json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (ctx.out_path.empty())
        std::cout << text;
    else
        write_text(ctx.out_path, text);
}

int run_solve(const CommandContext& ctx, const std::string& quantity_name,
              const std::string& bound_name, bool exact, bool want_witness, double tol,
              long max_iter, const std::string& trace_path) {
    ParsedModel model = parse_model(ctx.model_path);
    const Quantity quantity = quantity_name == "time" ? Quantity::time : Quantity::prob;
    const Bound bound = bound_name == "lower" ? Bound::lower : Bound::upper;

    IterateOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;

    HittingResult result;
    try {
        if (exact || want_witness)
            result = solve_exact(model.chain, model.target, quantity, bound, opts);
        else
            result = quantity == Quantity::time
                         ? iterate_hitting_time(model.chain, model.target, bound, opts)
                         : iterate_hitting_prob(model.chain, model.target, bound, opts);
    } catch (const NotConvergedError& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return 1;
    }
    if (!trace_path.empty()) emit_trace(result.trace, model.chain.states, trace_path);

    json config{{"quantity", quantity_name}, {"bound", bound_name},      {"exact", exact},
                {"tol", opts.tol},           {"max_iter", opts.max_iter}, {"witness", want_witness}};
    if (want_witness && quantity == Quantity::prob && bound == Bound::upper)
        config["lambda_schedule"] = default_lambda_schedule();
    json doc{{"command", "solve"},
             {"model_digest", model.digest},
             {"config", std::move(config)},
             {"values", values_to_json(model.chain.states, result.values)},
             {"classification",
              classification_to_json(model.chain.states,
                                     classify_states(model.chain, model.target))},
             {"residual", result.residual},
             {"termination", to_string(result.trace.termination)},
             {"iterations",
              result.trace.snapshots.empty() ? 0 : result.trace.snapshots.back().iteration}};
    if (want_witness && result.witness)
        doc["witness"] = witness_to_json(*result.witness, model.chain.states);
    deliver(ctx, doc);
    return 0;
}

int run_classify(const CommandContext& ctx) {
    ParsedModel model = parse_model(ctx.model_path);
    ClassificationReport report = classify_states(model.chain, model.target);
    json doc{{"command", "classify"},
             {"model_digest", model.digest},
             {"classification", classification_to_json(model.chain.states, report)}};
    deliver(ctx, doc);
    return 0;
}

int run_oracle(const CommandContext& ctx, const std::string& mode, int horizon, long samples,
               std::uint64_t seed) {
    ParsedModel model = parse_model(ctx.model_path);
    json doc{{"command", "oracle"}, {"model_digest", model.digest}, {"mode", mode}};
    bool agree = true;

    if (mode == "brute") {
        EnvelopeReport report = brute_force_envelope(model.chain, model.target);
        doc["chains"] = report.chains;
        doc["time_min"] = values_to_json(model.chain.states, report.time_min);
        doc["time_max"] = values_to_json(model.chain.states, report.time_max);
        doc["prob_min"] = values_to_json(model.chain.states, to_ext(report.prob_min));
        doc["prob_max"] = values_to_json(model.chain.states, to_ext(report.prob_max));
        doc["agreement"] = {{"time_lower", report.agreement.time_lower},
                            {"time_upper", report.agreement.time_upper},
                            {"prob_lower", report.agreement.prob_lower},
                            {"prob_upper_one_sided", report.agreement.prob_upper_one_sided},
                            {"worst_gap", report.agreement.worst_gap}};
        agree = report.agreement.all();
    } else if (mode == "tree") {
        json checks = json::array();
        double worst = 0.0;
        for (Quantity q : {Quantity::time, Quantity::prob}) {
            for (Bound b : {Bound::lower, Bound::upper}) {
                std::vector<double> tree =
                    backward_induction_truncated(model.chain, model.target, horizon, b, q);
                ExtVector markov =
                    truncated_values(model.chain, model.target, q, b, horizon);
                double gap = 0.0;
                for (int x = 0; x < model.chain.size(); ++x)
                    gap = std::max(gap, std::abs(tree[x] - markov[x].finite()));
                worst = std::max(worst, gap);
                checks.push_back({{"quantity", to_string(q)},
                                  {"bound", to_string(b)},
                                  {"horizon", horizon},
                                  {"max_gap", gap}});
            }
        }
        doc["checks"] = std::move(checks);
        doc["max_gap"] = worst;
        agree = worst <= 1e-10;
    } else if (mode == "mc") {
        MonteCarloReport report =
            monte_carlo_envelope_check(model.chain, model.target, horizon, samples, seed);
        doc["horizon"] = report.horizon;
        doc["samples"] = report.samples;
        doc["seed"] = report.seed;
        json stats = json::object();
        for (int x = 0; x < model.chain.size(); ++x) {
            const auto& st = report.per_state[x];
            stats[model.chain.states.labels[x]] = {{"time_mean", st.time_mean},
                                                   {"time_stderr", st.time_stderr},
                                                   {"prob_mean", st.prob_mean},
                                                   {"prob_stderr", st.prob_stderr}};
        }
        doc["per_state"] = std::move(stats);
        doc["violations"] = report.violations;
        agree = report.ok();
    } else {
        throw ParseError("unknown oracle mode '" + mode + "'");
    }

    doc["agree"] = agree;
    deliver(ctx, doc);
    return agree ? 0 : 3;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"bounds on expected hitting times and probabilities for imprecise Markov chains"};
    app.require_subcommand(1);

    CommandContext ctx;
    std::string quantity = "time", bound = "lower", trace_path, mode = "brute";
    bool exact = false, want_witness = false;
    double tol = 0.0;
    long max_iter = 1000000;
    int horizon = 6;
    long samples = 10000;
    std::uint64_t seed = 1;

    CLI::App* solve = app.add_subcommand("solve", "compute a hitting-time or -probability bound");
    solve->add_option("--model", ctx.model_path, "model file")->required();
    solve->add_option("--out", ctx.out_path, "result document path (default: stdout)");
    solve->add_option("--quantity", quantity, "time|prob")
        ->check(CLI::IsMember({"time", "prob"}))
        ->required();
    solve->add_option("--bound", bound, "lower|upper")
        ->check(CLI::IsMember({"lower", "upper"}))
        ->required();
    solve->add_flag("--exact", exact, "policy-iteration exact solve");
    solve->add_flag("--witness", want_witness, "attach a bound-attaining witness (implies --exact)");
    solve->add_option("--tol", tol, "stopping tolerance (0 = quantity default)");
    solve->add_option("--max-iter", max_iter, "iteration cap");
    solve->add_option("--trace", trace_path, "write the iteration trace CSV here");

    CLI::App* classify = app.add_subcommand("classify", "report the B/U/Z/C state classification");
    classify->add_option("--model", ctx.model_path, "model file")->required();
    classify->add_option("--out", ctx.out_path, "result document path (default: stdout)");

    CLI::App* oracle = app.add_subcommand("oracle", "independent brute-force/tree/Monte-Carlo checks");
    oracle->add_option("--model", ctx.model_path, "model file")->required();
    oracle->add_option("--out", ctx.out_path, "result document path (default: stdout)");
    oracle->add_option("--mode", mode, "brute|tree|mc")
        ->check(CLI::IsMember({"brute", "tree", "mc"}))
        ->required();
    oracle->add_option("--horizon", horizon, "truncation horizon (tree, mc)");
    oracle->add_option("--samples", samples, "sample count (mc)");
    oracle->add_option("--seed", seed, "rng seed (mc)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve->parsed())
            return run_solve(ctx, quantity, bound, exact, want_witness, tol, max_iter,
                             trace_path);
        if (classify->parsed()) return run_classify(ctx);
        return run_oracle(ctx, mode, horizon, samples, seed);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid model: " << e.what() << "\n";
        return 2;
    } catch (const VertexExplosionError& e) {
        std::cerr << "model too large: " << e.what() << "\n";
        return 2;
    } catch (const TreeTooLargeError& e) {
        std::cerr << "horizon too large: " << e.what() << "\n";
        return 2;
    } catch (const NotConvergedError& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}

int run_command(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args);
}

}  // namespace imc
