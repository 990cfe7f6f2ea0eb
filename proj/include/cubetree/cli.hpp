#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "audit.hpp"
#include "embeddings.hpp"
#include "io.hpp"
#include "ordinals.hpp"
#include "verify.hpp"

namespace cubetree::cli {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int bound_failed = 1;
inline constexpr int usage_error = 2;

namespace detail {

inline std::string read_input(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), {});
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write '" + path + "'");
    f << text;
}

inline TreeNode parse_node_arg(const std::string& text, std::size_t& k) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("--node expects k:path, e.g. 2:2,5 (root: 2:)");
    k = io::detail::parse_uint(std::string_view(text).substr(0, colon), "k");
    Point p = io::parse_point(std::string_view(text).substr(colon + 1));
    return TreeNode(std::vector<Element>(p.elements().begin(), p.elements().end()));
}

} // namespace detail

/// Runs the `cubetree` command line. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact low-distortion embeddings of Hamming-cube segments into tree spaces", "cubetree"};
    app.require_subcommand(1);

    std::size_t node_budget = EmbedOptions{}.node_budget;
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--node-budget", node_budget, "Max materialized tree nodes per image")
        ->envname("CUBETREE_NODE_BUDGET");
    app.add_option("--workers", workers, "Worker threads for pair sweeps")->envname("CUBETREE_WORKERS");

    std::string spec_text, set_text, a_text, b_text, format = "text", output, input, vector_text;

    auto* embed = app.add_subcommand("embed", "Print the image of a set");
    embed->add_option("--spec", spec_text, "finite:K,R | schreier | ai:P/Q[:N1,N2,...]")->required();
    embed->add_option("--set", set_text, "Comma-separated elements, e.g. 1,2,5")->required();
    embed->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* gap = app.add_subcommand("gap", "Print the image distance and the Hamming distance of two sets");
    gap->add_option("--spec", spec_text)->required();
    gap->add_option("--a", a_text)->required();
    gap->add_option("--b", b_text)->required();
    gap->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    auto* normc = app.add_subcommand("norm", "Tree-space norm of a serialized sparse or bundle vector");
    auto* norm_in = normc->add_option("--input", input, "JSON file ('-' for stdin)");
    auto* norm_vec = normc->add_option("--vector", vector_text, "Inline JSON");
    norm_in->excludes(norm_vec);

    std::size_t k = 0;
    Element n = 0, max_element = 15;
    std::uint64_t pairs = 0, seed = 0;
    auto* audit = app.add_subcommand("audit", "Measure distortion and check the embedding's bounds");
    audit->add_option("--spec", spec_text)->required();
    auto* k_opt = audit->add_option("--k", k, "Exhaustive sweep over delta_k([n])");
    auto* n_opt = audit->add_option("--n", n);
    auto* max_opt = audit->add_option("--max-element", max_element, "Largest element (Schreier sweep or sampler)");
    auto* pairs_opt = audit->add_option("--pairs", pairs, "Sampled pair count");
    auto* seed_opt = audit->add_option("--seed", seed);
    audit->add_option("--format", format)->check(CLI::IsMember({"text", "json", "csv"}));
    audit->add_option("--output", output);

    std::string ordinal_text, node_text;
    auto* cb = app.add_subcommand("cb", "Cantor-Bendixson index and derivative chain of [0, ordinal]");
    auto* ord_opt = cb->add_option("ordinal", ordinal_text, "CNF text, e.g. \"w^2*3 + w + 4\"");
    auto* node_opt = cb->add_option("--node", node_text, "k:path, prints the ordinal of a T_k node");
    ord_opt->excludes(node_opt);

    std::string claim_text, scale_text = "1";
    auto* trace = app.add_subcommand("trace", "Run the Aharoni packing argument against a claimed constant");
    trace->add_option("--claim", claim_text, "Claimed Lipschitz constant C < 2, as p/q")->required();
    auto* trace_in = trace->add_option("--input", input, "Finite embedding JSON ('-' for stdin)");
    auto* trace_spec = trace->add_option("--spec", spec_text, "Build from an embedding spec instead");
    trace->add_option("--n", n, "Truncation of tilde-delta-2 to [n] (with --spec)");
    trace->add_option("--scale", scale_text, "Multiply images by this factor (with --spec)");
    trace->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    trace_in->excludes(trace_spec);

    std::string table;
    auto* verify = app.add_subcommand("verify", "Run the acceptance criteria and print a pass/fail matrix");
    verify->add_option("--table", table, "Write the tightness table CSV here");
    verify->add_option("--seed", seed, "Seed for sampled criteria")->default_val(verify::VerifyOptions{}.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage_error;
    }

    const EmbedOptions eo{node_budget};
    const AuditOptions ao{workers, eo};
    try {
        if (embed->parsed()) {
            auto spec = io::parse_spec(spec_text);
            auto image = embed_set(spec, io::parse_point(set_text), eo);
            out << (format == "json" ? io::to_json(image).dump(2) + "\n" : io::to_text(image));
            return ok;
        }
        if (gap->parsed()) {
            auto spec = io::parse_spec(spec_text);
            Point a = io::parse_point(a_text), b = io::parse_point(b_text);
            std::int64_t g = pair_gap(spec, a, b, eo), d = distance(a, b);
            if (format == "json") {
                out << io::json{{"spec", spec.str()}, {"a", io::to_json(a)}, {"b", io::to_json(b)}, {"gap", g},
                                {"distance", d}}
                           .dump(2)
                    << "\n";
            } else {
                out << "gap = " << g << "\ndistance = " << d << "\n";
            }
            return ok;
        }
        if (normc->parsed()) {
            if (input.empty() && vector_text.empty()) throw ParseError("norm needs --input or --vector");
            auto j = io::json::parse(vector_text.empty() ? detail::read_input(input) : vector_text);
            std::int64_t value = j.contains("bands") ? bundle_norm(io::bundle_from_json(j))
                                                     : norm(io::sparse_vector_from_json(j));
            out << value << "\n";
            return ok;
        }
        if (audit->parsed()) {
            auto spec = io::parse_spec(spec_text);
            DistortionReport rep;
            if (*pairs_opt) {
                if (!*seed_opt) throw ParseError("sampled audits require --seed");
                rep = sample_distortion(spec, SamplerConfig{seed, pairs, max_element}, ao);
            } else if (*k_opt) {
                if (!*n_opt) throw ParseError("--k requires --n");
                rep = measure_distortion(spec, k, Universe{n}, ao);
            } else if (spec.as<Schreier>() && *max_opt) {
                rep = measure_schreier_distortion(spec, Universe{max_element}, ao);
            } else {
                throw ParseError("audit needs --k/--n, --pairs/--seed, or (schreier) --max-element");
            }
            std::string text = format == "json"  ? io::to_json(rep).dump(2) + "\n"
                               : format == "csv" ? io::csv_header() + "\n" + io::csv_row(rep) + "\n"
                                                 : io::to_text(rep);
            detail::write_output(output, text, out);
            if (rep.first_violation) {
                const auto& v = *rep.first_violation;
                err << "bound violated at " << v.pair.a.str() << " " << v.pair.b.str() << ": " << v.what << "\n";
                return bound_failed;
            }
            return ok;
        }
        if (cb->parsed()) {
            if (*node_opt) {
                std::size_t height = 0;
                TreeNode t = detail::parse_node_arg(node_text, height);
                out << node_to_ordinal(height, t).str() << "\n";
                return ok;
            }
            if (!*ord_opt) throw ParseError("cb needs an ordinal or --node");
            auto space = DerivedSpace::interval(OrdinalCNF::parse(ordinal_text));
            out << "I_CB = " << cb_index(space).str() << "\n";
            if (space.as<DerivedSpace::Interval>()->top.is_omega_omega()) {
                out << "chain: Interval(w^w) (not iterated: the derivation has a transfinite limit stage)\n";
                return ok;
            }
            auto chain = cb_chain(space);
            out << "chain:";
            for (std::size_t i = 0; i < chain.size(); ++i) out << (i ? " -> " : " ") << chain[i].str();
            out << "\n";
            return ok;
        }
        if (trace->parsed()) {
            Rational claim = Rational::parse(claim_text);
            FiniteEmbedding f;
            if (*trace_spec) {
                if (n < 3) throw ParseError("trace --spec needs --n >= 3");
                f = finite_embedding_from_spec(io::parse_spec(spec_text), collect(enumerate_tilde_delta2(Universe{n})),
                                               Rational::parse(scale_text), eo);
            } else if (!input.empty()) {
                f = io::finite_embedding_from_json(io::json::parse(detail::read_input(input)));
            } else {
                throw ParseError("trace needs --input or --spec");
            }
            TraceReport t = aharoni_trace(f, claim);
            if (format == "json") {
                out << io::to_json(t).dump(2) << "\n";
            } else {
                out << "verdict: " << to_string(t.verdict) << "\nclaim C = " << t.claim << ", eta = " << t.eta << "\n";
                if (t.lower_violation) {
                    out << "lower bound fails at " << t.lower_violation->a.str() << " " << t.lower_violation->b.str()
                        << "\n";
                    return ok;
                }
                out << "|X_12| = " << t.x12.size() << ", probes = " << t.probes.size()
                    << ", packing bound = " << (t.bound ? std::to_string(*t.bound) : "overflow")
                    << "\nradius = " << t.radius
                    << ", min separation = " << (t.min_separation ? t.min_separation->str() : "n/a") << "\n";
                if (t.upper_violation) {
                    out << "claim fails at " << t.upper_violation->a.str() << " " << t.upper_violation->b.str()
                        << "\n";
                }
            }
            return ok;
        }
        if (verify->parsed()) {
            verify::VerifyOptions vo{workers, seed};
            bool all = true;
            verify::run_acceptance(vo, [&](const verify::CriterionResult& r) {
                out << verify::format_result(r) << std::endl;
                all = all && r.passed;
                if (!r.artifact.empty() && !table.empty()) detail::write_output(table, r.artifact, out);
            });
            return all ? ok : bound_failed;
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const io::json::exception& e) {
        err << "error: malformed JSON input: " << e.what() << "\n";
        return usage_error;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const OverflowError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}

} // namespace cubetree::cli
