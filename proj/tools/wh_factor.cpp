#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "wh/dk.hpp"
#include "wh/serialize.hpp"
#include "wh/stability.hpp"
#include "wh/symbols.hpp"

namespace {

struct RunConfig {
    std::size_t grid_size = 4096;
    double tol = 1e-6;
    std::string format = "json";
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    std::string degree = "[8,8]";
    double epsilon = 1e-3;
};

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::pair<int, int> parse_degree(const std::string &spec) {
    std::string s = spec;
    if (!s.empty() && s.front() == '[')
        s.erase(s.begin());
    if (!s.empty() && s.back() == ']')
        s.pop_back();
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--degree", "expected \"[p,q]\"");
    try {
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception &) {
        throw CLI::ValidationError("--degree", "expected \"[p,q]\"");
    }
}

std::string path_join(const std::string &dir, const std::string &name) {
    if (dir.empty() || dir == ".")
        return name;
    return dir + "/" + name;
}

void validate(const RunConfig &cfg) {
    if (!is_pow2(cfg.grid_size) || cfg.grid_size < 256 || cfg.grid_size > (1u << 20))
        throw CLI::ValidationError("--grid-size", "must be a power of two in [2^8, 2^20]");
    if (!(cfg.tol > 0.0) || cfg.tol > 1e-2)
        throw CLI::ValidationError("--tol", "must lie in (0, 1e-2]");
}

wh::DKMatrix named_dk_example(const std::string &name, wh::GridPtr grid) {
    if (name == "k1")
        return wh::make_k1(std::move(grid));
    if (name == "k2")
        return wh::make_k2(std::move(grid));
    throw wh::Error("unknown matrix example: " + name);
}

wh::DKMatrix dk_from_spec_file(const std::string &path, wh::GridPtr grid) {
    std::ifstream in(path);
    if (!in)
        throw wh::Error("cannot read spec file: " + path);
    wh::json doc = wh::json::parse(in);
    auto cx = [](const wh::json &v) { return wh::cplx(v.at(0).get<double>(), v.at(1).get<double>()); };
    wh::cplx fc = doc.contains("f_constant") ? cx(doc["f_constant"]) : wh::cplx(0.0);
    wh::cplx top = doc.contains("J_top") ? cx(doc["J_top"]) : wh::cplx(1.0);
    wh::cplx bottom = doc.contains("J_bottom") ? cx(doc["J_bottom"]) : wh::cplx(-2.0);
    wh::GridFunction f = wh::GridFunction::sample(grid, [fc](double) { return fc; }, fc);
    return wh::DKMatrix{std::move(f), wh::EntireMatrixJ::anti_diagonal(top, bottom)};
}

int cmd_factor_scalar(const RunConfig &cfg, const std::string &symbol_name) {
    wh::Symbol sym = wh::find_scalar_symbol(symbol_name);
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::ScalarFactorization fac = wh::factorize_scalar(sym.sample(grid));
    wh::write_text_file(path_join(cfg.out_dir, "factor_scalar_" + symbol_name + ".json"),
                        wh::to_json(fac).dump(2) + "\n");
    wh::write_text_file(path_join(cfg.out_dir, "factor_scalar_" + symbol_name + "_modulus.csv"),
                        wh::modulus_trace_csv(fac.plus, fac.minus));
    std::printf("symbol=%s kappa=%d residual=%.3e\n", symbol_name.c_str(), fac.index,
                fac.residual);
    return fac.residual <= cfg.tol ? 0 : 3;
}

int cmd_factor_dk(const RunConfig &cfg, const std::string &example, const std::string &spec_file) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::DKMatrix K = spec_file.empty() ? named_dk_example(example, grid)
                                       : dk_from_spec_file(spec_file, grid);
    wh::MatrixFactorization fac = wh::dk_factorize(K);
    std::pair<int, int> indices = fac.partial_indices;
    if (K.J.is_constant_anti_diagonal())
        indices = wh::dk_partial_indices(K);
    std::string tag = spec_file.empty() ? example : "spec";
    wh::write_text_file(path_join(cfg.out_dir, "factor_dk_" + tag + ".json"),
                        wh::to_json(fac).dump(2) + "\n");
    wh::write_text_file(path_join(cfg.out_dir, "factor_dk_" + tag + "_modulus_a11.csv"),
                        wh::modulus_trace_csv(fac.plus.a11, fac.minus.a11));
    wh::write_text_file(path_join(cfg.out_dir, "factor_dk_" + tag + "_modulus_a12.csv"),
                        wh::modulus_trace_csv(fac.plus.a12, fac.minus.a12));
    std::printf("example=%s indices=(%d,%d) residual=%.3e\n", tag.c_str(), indices.first,
                indices.second, fac.residual);
    return fac.residual <= cfg.tol ? 0 : 3;
}

int cmd_compare_methods(const RunConfig &cfg, const std::string &example) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::DKMatrix K = named_dk_example(example, grid);
    wh::Symbol sym = example == "k1" ? wh::symbol_k1_data() : wh::symbol_k2_data();
    auto degree = parse_degree(cfg.degree);
    wh::MethodComparison cmp =
        wh::compare_methods(K, sym.fn, std::max(degree.first, degree.second), cfg.tol);
    wh::write_text_file(path_join(cfg.out_dir, "compare_" + example + ".json"),
                        wh::to_json(cmp).dump(2) + "\n");
    wh::write_text_file(path_join(cfg.out_dir, "compare_" + example + "_a11_diff.csv"),
                        wh::gridfunction_csv(cmp.a11_diff));
    std::printf("example=%s a11_sup=%.3e a11_l2=%.3e bound=%.3e exact_ms=%.2f approx_ms=%.2f\n",
                example.c_str(), cmp.a11_sup, cmp.a11_l2, cmp.bound, cmp.exact_ms,
                cmp.approx_ms);
    if (cmp.degenerate_fit)
        std::printf("warning: rational fit did not converge at the requested degree\n");
    if (cmp.approx_ms >= cmp.exact_ms)
        std::printf("warning: approximate path was not faster on this hardware\n");
    if (cmp.exact_fac.residual > cfg.tol)
        return 3;
    if (!cmp.degenerate_fit && cmp.approx_fac.residual > cfg.tol)
        return 3;
    return 0;
}

int cmd_stability_bounds(const RunConfig &cfg, const std::string &example) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::DKMatrix K = named_dk_example(example, grid);
    wh::Symbol sym = example == "k1" ? wh::symbol_k1_data() : wh::symbol_k2_data();
    auto degree = parse_degree(cfg.degree);
    wh::RationalApproximation fit =
        wh::fit_rational(sym.fn, sym.limit, grid, std::max(degree.first, degree.second), 1e-12);
    wh::DKMatrix K_tilde{
        wh::GridFunction(grid, fit.approximant.sample(grid).values(), K.f.limit_at_infinity()),
        K.J};
    wh::DKBoundReport rep = wh::lemma_bounds(K, K_tilde);
    wh::write_text_file(path_join(cfg.out_dir, "bounds_" + example + ".json"),
                        wh::to_json(rep).dump(2) + "\n");
    std::printf("example=%s epsilon=%.3e measured_r=%.3e r_bound=%.3e measured_theta=%.3e "
                "theta_bound=%.3e\n",
                example.c_str(), rep.epsilon, rep.measured_r, rep.r_bound, rep.measured_theta,
                rep.theta_bound);
    bool ok = rep.measured_r <= rep.r_bound && rep.measured_theta <= rep.theta_bound;
    return ok ? 0 : 3;
}

int cmd_stability_sweep(const RunConfig &cfg, const std::string &example, int count) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::DKMatrix K = named_dk_example(example, grid);
    wh::PerturbationFamily family;
    family.seed = cfg.seed;
    wh::SweepResult result = wh::perturbation_sweep(K, family, count);
    wh::write_text_file(path_join(cfg.out_dir, "sweep_" + example + ".csv"),
                        wh::sweep_csv(result));
    wh::write_text_file(path_join(cfg.out_dir, "sweep_" + example + "_summary.json"),
                        wh::sweep_summary(result).dump(2) + "\n");
    std::printf("draws=%zu admissible=%d passes=%d slope=%.3f\n", result.draws.size(),
                result.admissible_count, result.passes, result.slope);
    return (count == 0 || result.passes == result.admissible_count) ? 0 : 3;
}

int cmd_stability_unstable(const RunConfig &cfg) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::UnstableExample ex = wh::unstable_example(cfg.epsilon, grid);
    wh::json doc{{"epsilon", cfg.epsilon},
                 {"unperturbed", wh::to_json(ex.unperturbed)}};
    auto idx = ex.unperturbed.partial_indices;
    double worst = ex.unperturbed.residual;
    if (ex.perturbed) {
        doc["perturbed"] = wh::to_json(*ex.perturbed);
        idx = ex.perturbed->partial_indices;
        worst = std::max(worst, ex.perturbed->residual);
    }
    wh::write_text_file(path_join(cfg.out_dir, "unstable.json"), doc.dump(2) + "\n");
    std::printf("epsilon=%.3e indices=(%d,%d) index_sum=%d residual=%.3e\n", cfg.epsilon,
                idx.first, idx.second, idx.first + idx.second, worst);
    return worst <= cfg.tol ? 0 : 3;
}

int cmd_stability_abrahams(const RunConfig &cfg, double k_value) {
    wh::GridPtr grid = wh::Grid::moebius(cfg.grid_size);
    wh::MeromorphicFactorization mf = wh::pole_removal_example(k_value, cfg.epsilon, grid);
    double det_err = wh::removal_det_error(mf.removal);
    double plus_defect = wh::matrix_defect(mf.final_plus, wh::HalfPlane::Plus);
    double minus_defect = wh::matrix_defect(mf.final_minus, wh::HalfPlane::Minus);
    wh::GridMat2 symbol = wh::perturbed_diagonal_symbol(k_value, cfg.epsilon, grid);
    wh::MatrixFactorization final_fac{mf.final_plus, mf.final_minus, {0, 0}, 0.0, {}};
    final_fac.residual = wh::factorization_residual(final_fac, symbol);
    wh::json doc{{"k", k_value},
                 {"epsilon", cfg.epsilon},
                 {"det_m_error", det_err},
                 {"base_residual", mf.base.residual},
                 {"final_residual", final_fac.residual},
                 {"plus_defect", plus_defect},
                 {"minus_defect", minus_defect},
                 {"removal", wh::json{{"a11", wh::to_json(mf.removal.a11)},
                                      {"a12", wh::to_json(mf.removal.a12)},
                                      {"a21", wh::to_json(mf.removal.a21)},
                                      {"a22", wh::to_json(mf.removal.a22)}}}};
    wh::write_text_file(path_join(cfg.out_dir, "pole_removal.json"), doc.dump(2) + "\n");
    std::printf("k=%.3f epsilon=%.3e det_err=%.3e final_residual=%.3e defects=(%.3e,%.3e)\n",
                k_value, cfg.epsilon, det_err, final_fac.residual, plus_defect, minus_defect);
    bool ok = det_err <= 1e-12 && final_fac.residual <= cfg.tol &&
              plus_defect <= cfg.tol && minus_defect <= cfg.tol;
    return ok ? 0 : 3;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Wiener-Hopf factorisation toolkit"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--grid-size", cfg.grid_size, "node count, power of two")
        ->envname("WH_FACTOR_GRID");
    app.add_option("--tol", cfg.tol, "residual tolerance");
    app.add_option("--format", cfg.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--seed", cfg.seed, "seed for sweeps");
    app.add_option("--degree", cfg.degree, "rational fit degree \"[p,q]\"");
    app.add_option("--epsilon", cfg.epsilon, "perturbation size");

    std::string symbol_name = "f-example-k2";
    auto *scalar_cmd = app.add_subcommand("factor-scalar", "factor a scalar symbol");
    scalar_cmd->add_option("--symbol", symbol_name, "named symbol")
        ->check(CLI::IsMember({"f-example-k2", "sqrt-ratio", "third-kind", "k-third-ex", "one"}));

    std::string example = "k1";
    std::string spec_file;
    auto *dk_cmd = app.add_subcommand("factor-dk", "factor a 2x2 matrix symbol");
    dk_cmd->add_option("--example", example, "k1 or k2")->check(CLI::IsMember({"k1", "k2"}));
    dk_cmd->add_option("--spec", spec_file, "JSON file with a constant-f symbol");

    std::string cmp_example = "k1";
    auto *cmp_cmd = app.add_subcommand("compare-methods",
                                       "exact vs rational-approximation factorisation");
    cmp_cmd->add_option("--example", cmp_example, "k1 or k2")
        ->check(CLI::IsMember({"k1", "k2"}));

    auto *stab_cmd = app.add_subcommand("stability", "perturbation experiments");
    stab_cmd->require_subcommand(1);
    std::string stab_example = "k1";
    int sweep_count = 100;
    double k_value = 1.0;
    auto *bounds_cmd = stab_cmd->add_subcommand("bounds", "lemma bound report");
    bounds_cmd->add_option("--example", stab_example, "k1 or k2")
        ->check(CLI::IsMember({"k1", "k2"}));
    auto *sweep_cmd = stab_cmd->add_subcommand("sweep", "random perturbation sweep");
    sweep_cmd->add_option("--example", stab_example, "k1 or k2")
        ->check(CLI::IsMember({"k1", "k2"}));
    sweep_cmd->add_option("--count", sweep_count, "number of draws");
    stab_cmd->add_subcommand("unstable", "diagonal example with unstable indices");
    auto *abr_cmd = stab_cmd->add_subcommand("abrahams", "meromorphic factorisation with pole "
                                                         "removal");
    abr_cmd->add_option("--k", k_value, "constant value of f");

    // let the shared options appear after the subcommand name as well
    for (CLI::App *sub : {scalar_cmd, dk_cmd, cmp_cmd, stab_cmd, bounds_cmd, sweep_cmd,
                          stab_cmd->get_subcommand("unstable"), abr_cmd})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
        validate(cfg);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (scalar_cmd->parsed())
            return cmd_factor_scalar(cfg, symbol_name);
        if (dk_cmd->parsed())
            return cmd_factor_dk(cfg, example, spec_file);
        if (cmp_cmd->parsed())
            return cmd_compare_methods(cfg, cmp_example);
        if (stab_cmd->parsed()) {
            if (stab_cmd->get_subcommand("bounds")->parsed())
                return cmd_stability_bounds(cfg, stab_example);
            if (stab_cmd->get_subcommand("sweep")->parsed())
                return cmd_stability_sweep(cfg, stab_example, sweep_count);
            if (stab_cmd->get_subcommand("unstable")->parsed())
                return cmd_stability_unstable(cfg);
            if (stab_cmd->get_subcommand("abrahams")->parsed())
                return cmd_stability_abrahams(cfg, k_value);
        }
    } catch (const wh::Error &e) {
        std::fprintf(stderr, "factorisation failed: %s\n", e.what());
        return 3;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
