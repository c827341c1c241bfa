// SPDX-License-Identifier: Apache-2.0
//
// Minimal walkthrough: generate a system, solve it with the original
// single-array circuit and the one-stage block cascade under device
// noise, and compare against the numerical reference.

#include <cstdio>

#include "blockamc/blockamc.hpp"

using namespace blockamc;

int main() {
    matgen::GenSpec spec;
    spec.kind = matgen::Kind::wishart;
    spec.n = 64;
    spec.seed = 7;
    spec.wishart_m = 8 * spec.n;

    const Matrix a = matgen::generate(spec);
    const Vector b = matgen::gen_rhs(spec.n, 11);
    const Vector x_ref = solve_dense(a, b);

    solver::SolveOptions opt;
    opt.map.sigma_rel = 0.05;  // 5% of G0 programming noise
    opt.seed = 42;

    const auto original = solver::solve_original(a, b, opt);
    const auto one_stage = solver::solve_one_stage(a, b, opt);

    std::printf("n = %ld wishart system, sigma = 0.05 G0, ideal circuits\n",
                static_cast<long>(spec.n));
    std::printf("original  eps_r = %.4f\n",
                bench::relative_error(x_ref, original.x_hat));
    std::printf("one_stage eps_r = %.4f  (arrays: %zu)\n",
                bench::relative_error(x_ref, one_stage.x_hat),
                one_stage.arrays.size());

    // noise-free run: both solvers match the reference to machine precision
    opt.map.sigma_rel = 0.0;
    const auto exact = solver::solve_one_stage(a, b, opt);
    std::printf("noise-free one_stage eps_r = %.3g\n",
                bench::relative_error(x_ref, exact.x_hat));
    return 0;
}
