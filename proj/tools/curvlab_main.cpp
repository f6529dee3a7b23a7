// curvlab: batch front-end for the pointwise curvature-algebra library.
//
// Subcommands:
//   verify   run a verification suite        (exit 0 pass / 1 failure)
//   analyze  report on a tensor JSON file    (exit 3 parse / 4 validation)
//   model    emit a model-space tensor as JSON
//   search   look for near-tight instances of the projective Gamma bound

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/algebra.hpp"
#include "curvlab/estimates.hpp"
#include "curvlab/json_io.hpp"
#include "curvlab/models.hpp"
#include "curvlab/rng.hpp"
#include "curvlab/verify.hpp"

namespace {

using nlohmann::json;
using namespace curvlab;

constexpr int kExitPass = 0;
constexpr int kExitSuiteFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitValidation = 4;

json check_to_json(const verify::CheckResult& c) {
    json j;
    j["id"] = c.id;
    j["cases"] = c.cases;
    j["max_residual"] = c.max_residual;
    j["tolerance"] = c.tolerance;
    j["worst_seed"] = c.worst_seed;
    j["passed"] = c.passed;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

int cmd_verify(const std::string& suite, int m, int cases, std::uint64_t seed, double tol,
               const std::string& format) {
    verify::SuiteOptions opt;
    opt.m = m;
    opt.cases = cases;
    opt.seed = seed;
    opt.tol_scale = tol;
    const std::vector<verify::CheckResult> results = verify::run_suite(suite, opt);

    bool all_passed = true;
    for (const verify::CheckResult& c : results) all_passed &= c.passed;

    if (format == "json") {
        json j;
        j["suite"] = suite;
        j["m"] = m;
        j["cases"] = cases;
        j["seed"] = seed;
        j["passed"] = all_passed;
        j["checks"] = json::array();
        for (const verify::CheckResult& c : results) j["checks"].push_back(check_to_json(c));
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("suite %-10s m=%d cases=%d seed=%llu\n", suite.c_str(), m, cases,
                    static_cast<unsigned long long>(seed));
        for (const verify::CheckResult& c : results) {
            std::printf("  %-38s %5d cases  max %.3e  tol %.1e  %s%s%s\n", c.id.c_str(), c.cases,
                        c.max_residual, c.tolerance, c.passed ? "pass" : "FAIL",
                        c.detail.empty() ? "" : "  ", c.detail.c_str());
            if (!c.passed)
                std::printf("    worst seed %llu\n", static_cast<unsigned long long>(c.worst_seed));
        }
        int npass = 0;
        for (const verify::CheckResult& c : results) npass += c.passed ? 1 : 0;
        std::printf("%d/%zu checks passed\n", npass, results.size());
    }
    return all_passed ? kExitPass : kExitSuiteFailure;
}

int cmd_analyze(const std::string& input, const std::string& format, std::optional<int> only_k) {
    TensorFile file = load_tensor_json(input);
    if (file.tensor.rank() != 4) {
        std::cerr << "analyze: expected a rank-4 tensor, got rank " << file.tensor.rank() << '\n';
        return kExitValidation;
    }
    const DenseTensor on = orthonormalize(file.tensor, file.g);
    const double sym = symmetry_residual(on);
    const double b1 = bianchi_residual(on);
    if (sym > 1e-6 || b1 > 1e-6) {
        json j;
        j["valid"] = false;
        j["symmetry_residual"] = sym;
        j["bianchi_residual"] = b1;
        if (format == "json")
            std::cout << j.dump(2) << '\n';
        else
            std::printf("invalid curvature tensor: symmetry residual %.3e, Bianchi residual %.3e\n",
                        sym, b1);
        return kExitValidation;
    }

    const CurvTensor t = CurvTensor::unchecked(on);
    const int m = t.dim();
    const int n = binomial2(m);
    const Decomposition d = decompose(t);
    const Spectrum sp = curvature_spectrum(t);
    const double p2 = pseudo_projective(t).norm2();

    json j;
    j["m"] = m;
    j["symmetry_residual"] = sym;
    j["bianchi_residual"] = b1;
    j["norm2"] = t.norm2();
    j["scalar_trace"] = d.S;
    j["ricci_norm2"] = d.E.norm2();
    j["traceless_ricci_norm2"] = d.Z.norm2();
    j["weyl_norm2"] = d.W.norm2();
    j["projective_norm2"] = p2;
    j["spectrum"] = sp.values;
    {
        json pt = json::array();
        for (int k = 1; k <= n; ++k) pt.push_back(partial_trace(sp, k));
        j["partial_traces"] = std::move(pt);
    }
    {
        json pins = json::array();
        for (int k = 1; k < n; ++k) {
            if (only_k && *only_k != k) continue;
            const BoundReport r = pinching_check(t, k);
            pins.push_back({{"k", k},
                            {"lhs", r.lhs},
                            {"rhs", r.rhs},
                            {"slack", r.slack},
                            {"applicable", r.applicable},
                            {"satisfied", r.satisfied}});
        }
        j["pinching"] = std::move(pins);
    }
    {
        const auto bound_json = [](const BoundReport& r) {
            return json{{"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"slack", r.slack},
                        {"scale", r.scale},
                        {"satisfied", r.satisfied},
                        {"context", r.context}};
        };
        json bounds;
        if (d.W.norm() > 1e-14 * std::max(1.0, t.norm()))
            bounds["weyl"] = bound_json(weyl_bound_slack(d.W, t));
        else
            bounds["weyl"] = {{"skipped", "weyl part vanishes"}};
        bounds["traceless"] = bound_json(traceless_bound_slack(d.Z, t));
        const TachibanaReport tr = tachibana_slack(t, t);
        bounds["projective"] = bound_json(tr.report);
        bounds["projective"]["gamma_weyl"] = tr.gamma_weyl;
        bounds["projective"]["gamma_traceless"] = tr.gamma_traceless;
        j["bounds"] = std::move(bounds);
    }

    if (format == "json") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("m = %d   |T|^2 = %.12g   S = %.12g\n", m, t.norm2(), d.S);
        std::printf("|E|^2 = %.12g  |Z|^2 = %.12g  |W|^2 = %.12g  |P|^2 = %.12g\n", d.E.norm2(),
                    d.Z.norm2(), d.W.norm2(), p2);
        std::printf("spectrum:");
        for (double v : sp.values) std::printf(" %.12g", v);
        std::printf("\npartial traces:");
        for (int k = 1; k <= n; ++k) std::printf(" %.12g", partial_trace(sp, k));
        std::printf("\n");
        for (const auto& pin : j["pinching"])
            std::printf("pinching k=%d: lhs %.6g rhs %.6g %s%s\n", pin["k"].get<int>(),
                        pin["lhs"].get<double>(), pin["rhs"].get<double>(),
                        pin["applicable"].get<bool>() ? "" : "(inapplicable) ",
                        pin["satisfied"].get<bool>() ? "ok" : "VIOLATED");
        for (const char* key : {"weyl", "traceless", "projective"}) {
            const json& b = j["bounds"][key];
            if (b.contains("skipped"))
                std::printf("%s bound: skipped (%s)\n", key, b["skipped"].get<std::string>().c_str());
            else
                std::printf("%s bound: lhs %.6g rhs %.6g slack %.3e %s\n", key,
                            b["lhs"].get<double>(), b["rhs"].get<double>(),
                            b["slack"].get<double>(),
                            b["satisfied"].get<bool>() ? "ok" : "VIOLATED");
        }
    }
    return kExitPass;
}

int cmd_model(const std::string& name, const std::vector<double>& params) {
    if (name == "constant") {
        if (params.size() != 2) {
            std::cerr << "model constant needs: m kappa\n";
            return kExitUsage;
        }
        const CurvTensor t = constant_curvature(static_cast<int>(params[0]), params[1]);
        std::cout << tensor_to_json(t.tensor()) << '\n';
        return kExitPass;
    }
    if (name == "sphere-flat") {
        if (params.size() != 3) {
            std::cerr << "model sphere-flat needs: p r q\n";
            return kExitUsage;
        }
        const CurvTensor t = product_sphere_flat(static_cast<int>(params[0]), params[1],
                                                 static_cast<int>(params[2]));
        std::cout << tensor_to_json(t.tensor()) << '\n';
        return kExitPass;
    }
    if (name == "ricci3d") {
        if (params.size() != 3) {
            std::cerr << "model ricci3d needs: three Ricci eigenvalues\n";
            return kExitUsage;
        }
        SymTwoTensor e(3);
        for (int i = 0; i < 3; ++i) e.set(i, i, params[static_cast<std::size_t>(i)]);
        std::cout << tensor_to_json(curvature_from_ricci_3d(e).tensor()) << '\n';
        return kExitPass;
    }
    std::cerr << "unknown model: " << name << " (expected constant | sphere-flat | ricci3d)\n";
    return kExitUsage;
}

// Random restarts plus coordinate perturbation descent on the normalized
// slack of the projective Gamma bound.
int cmd_search(int m, int iters, std::uint64_t seed, const std::string& format) {
    if (m < 3 || m > 7) {
        std::cerr << "search: m must be in 3..7\n";
        return kExitUsage;
    }
    const auto normalized_slack = [](const CurvTensor& t, const CurvTensor& r,
                                     double* slack_out) -> double {
        const TachibanaReport rep = tachibana_slack(t, r);
        const double p2 = pseudo_projective(t).norm2();
        const double opn = curvature_spectrum(r).op_norm();
        if (slack_out) *slack_out = rep.report.slack;
        const double denom = p2 * opn;
        if (denom < 1e-10 * std::max(1.0, t.norm2()))
            return std::numeric_limits<double>::infinity();  // degenerate: P ~ 0
        return rep.report.slack / denom;
    };

    CurvTensor t = random_curvature_tensor(m, seed);
    CurvTensor r = random_curvature_tensor(m, seed ^ 0x52eedULL);
    double best = normalized_slack(t, r, nullptr);
    CurvTensor best_t = t, best_r = r;
    int degenerate_skipped = 0;
    int stale = 0;

    Rng rng(seed, 0x5ea7c4);
    for (int it = 0; it < iters; ++it) {
        if (std::isinf(best) || stale > std::max(50, iters / 10)) {
            t = random_curvature_tensor(m, seed + 7919ULL * static_cast<std::uint64_t>(it) + 1);
            r = random_curvature_tensor(m, seed ^ (104729ULL * static_cast<std::uint64_t>(it) + 3));
            const double v = normalized_slack(t, r, nullptr);
            if (std::isinf(v)) {
                ++degenerate_skipped;
                continue;
            }
            if (v < best) {
                best = v;
                best_t = t;
                best_r = r;
            }
            stale = 0;
            continue;
        }
        const bool perturb_t = rng.uniform() < 0.5;
        const double step = 0.3 * std::pow(0.5, static_cast<double>(stale) / 40.0);
        CurvTensor tc = t, rc = r;
        if (perturb_t) {
            DenseTensor dir = random_tensor(m, 4, rng.next_u64());
            tc = project_curvature_symmetries(t.tensor() + (step / dir.norm()) * dir);
        } else {
            DenseTensor dir = random_tensor(m, 4, rng.next_u64());
            rc = project_curvature_symmetries(r.tensor() + (step / dir.norm()) * dir);
        }
        const double v = normalized_slack(tc, rc, nullptr);
        if (std::isinf(v)) {
            ++degenerate_skipped;
            ++stale;
            continue;
        }
        if (v < best - 1e-15) {
            best = v;
            t = tc;
            r = rc;
            best_t = tc;
            best_r = rc;
            stale = 0;
        } else {
            ++stale;
        }
    }

    double final_slack = 0;
    normalized_slack(best_t, best_r, &final_slack);
    json j;
    j["m"] = m;
    j["iters"] = iters;
    j["seed"] = seed;
    j["min_normalized_slack"] = best;
    j["min_slack"] = final_slack;
    j["degenerate_skipped"] = degenerate_skipped;
    j["violation"] = best < -1e-9;
    j["T"] = json::parse(tensor_to_json(best_t.tensor()));
    j["R"] = json::parse(tensor_to_json(best_r.tensor()));
    if (format == "json") {
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("m=%d iters=%d: min normalized slack %.6e (raw slack %.6e), degenerate %d\n", m,
                    iters, best, final_slack, degenerate_skipped);
        if (best < -1e-9) std::printf("VIOLATION: negative slack beyond tolerance\n");
    }
    return best < -1e-9 ? kExitSuiteFailure : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pointwise curvature-algebra laboratory"};
    app.require_subcommand(1);

    std::string suite = "all";
    std::string format = "text";
    std::string input;
    int m = 4;
    int cases = 100;
    int iters = 1000;
    std::uint64_t seed = 42;
    double tol = 1.0;
    int k_flag = -1;

    CLI::App* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    verify_cmd->add_option("--suite", suite, "core|spectral|algebra|estimates|jets|models|metriclab|all");
    verify_cmd->add_option("--m", m, "dimension (3..10)");
    verify_cmd->add_option("--cases", cases, "random cases per check");
    verify_cmd->add_option("--seed", seed, "base seed");
    verify_cmd->add_option("--tol", tol, "tolerance scale factor");
    verify_cmd->add_option("--format", format, "text|json");

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a tensor JSON file");
    analyze_cmd->add_option("--input", input, "tensor JSON file")->required();
    analyze_cmd->add_option("--format", format, "text|json");
    analyze_cmd->add_option("--k", k_flag, "restrict the pinching report to one level");

    CLI::App* model_cmd = app.add_subcommand("model", "emit a model-space tensor as JSON");
    std::string model_name;
    std::vector<double> model_params;
    model_cmd->add_option("name", model_name, "constant | sphere-flat | ricci3d")->required();
    model_cmd->add_option("params", model_params, "model parameters");

    CLI::App* search_cmd = app.add_subcommand("search", "search for near-tight bound instances");
    search_cmd->add_option("--m", m, "dimension (3..7)");
    search_cmd->add_option("--iters", iters, "total iterations");
    search_cmd->add_option("--seed", seed, "base seed");
    search_cmd->add_option("--format", format, "text|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (verify_cmd->parsed()) {
            if (!curvlab::verify::is_suite(suite)) {
                std::cerr << "unknown suite: " << suite << '\n';
                return kExitUsage;
            }
            if (format != "text" && format != "json") {
                std::cerr << "unknown format: " << format << '\n';
                return kExitUsage;
            }
            return cmd_verify(suite, m, cases, seed, tol, format);
        }
        if (analyze_cmd->parsed()) {
            std::optional<int> only_k;
            if (k_flag > 0) only_k = k_flag;
            return cmd_analyze(input, format, only_k);
        }
        if (model_cmd->parsed()) return cmd_model(model_name, model_params);
        if (search_cmd->parsed()) return cmd_search(m, iters, seed, format);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const validation_error& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSuiteFailure;
    }
    return kExitUsage;
}
