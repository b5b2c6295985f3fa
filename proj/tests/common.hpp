// Shared fixtures: the four-atom ground truth, its measurement setup and a
// cached reference run.
#pragma once

#include <cmath>
#include <random>

#include "tgv1d/fourier_fidelity.hpp"
#include "tgv1d/function_space.hpp"
#include "tgv1d/gcg_solver.hpp"

namespace fixtures {

inline constexpr double kAlpha = 2.205;
inline constexpr double kBeta = 2.5344;
inline constexpr double kT = 10.0;
inline constexpr std::uint64_t kSeed = 27;

inline tgv1d::TgvParams params() { return {kAlpha, kBeta, kT}; }

inline tgv1d::SparseFunction truth() {
  using tgv1d::AtomKind;
  const tgv1d::ExtremalAtom atoms[] = {{AtomKind::Kink, 2.0, -1},
                                       {AtomKind::Jump, 6.3, 1},
                                       {AtomKind::Kink, 7.8, -1},
                                       {AtomKind::Jump, 9.1, -1}};
  const double weights[] = {4.5 * kBeta, 5.0 * kAlpha, 8.2 * kBeta, 8.3 * kAlpha};
  return tgv1d::assemble(atoms, weights, 3.0, 2.0, params());
}

inline std::vector<double> frequencies() { return tgv1d::equispaced_frequencies(8, 10.0 / 9.0); }

inline tgv1d::MeasurementSetup setup(double noise = 0.1, std::uint64_t seed = kSeed) {
  return tgv1d::synthesize(truth(), frequencies(), noise, seed);
}

inline tgv1d::SolverConfig config() {
  tgv1d::SolverConfig c;
  c.params = params();
  return c;
}

// One solver run shared by every test in a binary.
struct Reference {
  tgv1d::MeasurementSetup setup;
  tgv1d::FourierFidelity fidelity;
  tgv1d::RunResult run;

  Reference() : setup(fixtures::setup()), fidelity(setup), run(tgv1d::GcgSolver(fidelity, config()).run()) {}
};

inline const Reference& reference() {
  static const Reference r;
  return r;
}

// Random sparse function with admissible kinks.
inline tgv1d::SparseFunction random_sparse(std::mt19937_64& rng, const tgv1d::TgvParams& p, int jumps = 3,
                                           int kinks = 3) {
  std::uniform_real_distribution<double> pos(0.05 * p.T, 0.95 * p.T), w(0.1, 3.0), c(-2.0, 2.0);
  std::bernoulli_distribution coin;
  std::vector<tgv1d::AtomTerm> js, ks;
  for (int i = 0; i < jumps; ++i) js.push_back({pos(rng), coin(rng) ? 1 : -1, w(rng)});
  for (int i = 0; i < kinks; ++i) ks.push_back({pos(rng), coin(rng) ? 1 : -1, w(rng)});
  return tgv1d::SparseFunction(p, js, ks, c(rng), c(rng));
}

}  // namespace fixtures
