#include <gtest/gtest.h>

#include <numeric>

#include "mpuc/dynamics.hpp"
#include "mpuc/errors.hpp"
#include "mpuc/models.hpp"

using namespace mpuc;

namespace {

SymmetricMpu zdzd(int d, std::optional<double> h = std::nullopt) {
  ModelParams p;
  p.d = d;
  p.h = h;
  return instantiate(h ? "zdzd-floquet-perturbed" : "zdzd-spt", p);
}

// Flat spectrum expected after t steps: (d / gcd(d, t))^2 equal weights.
std::vector<double> flat_spectrum(int d, int t) {
  const int m = d / std::gcd(d, t);
  return std::vector<double>(static_cast<size_t>(m) * m, 1.0 / (m * m));
}

}  // namespace

TEST(Dynamics, ProductStateIsNormalised) {
  const PureState s = product_state(3, 4, 5);
  EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitudes(5)), 1.0, 1e-15);
  EXPECT_THROW(product_state(20, 4), Error);
}

TEST(Dynamics, EvolutionIsUnitary) {
  const auto states = evolve(product_state(4, 4), zdzd(2, 0.3), 5);
  ASSERT_EQ(states.size(), 6u);
  for (const auto& s : states) EXPECT_NEAR(s.amplitudes.norm(), 1.0, 1e-12);
}

TEST(Dynamics, SpectrumMatchesFlatOracle) {
  for (auto [d, L] : std::vector<std::pair<int, int>>{{2, 4}, {3, 4}}) {
    const auto states = evolve(product_state(L, d * d), zdzd(d), 2 * d);
    for (int t = 0; t <= 2 * d; ++t) {
      const auto spec = entanglement_spectrum(states[t], L / 2);
      const auto want = flat_spectrum(d, t);
      for (size_t i = 0; i < spec.size(); ++i)
        EXPECT_NEAR(spec[i], i < want.size() ? want[i] : 0.0, 1e-10) << d << " " << t << " " << i;
      EXPECT_NEAR(entropy(spec), std::log(double(want.size())), 1e-9);
      EXPECT_TRUE(all_divisible(degeneracy_profile(spec), static_cast<int>(want.size())));
    }
  }
}

TEST(Dynamics, OracleMpsMatchesEvolvedState) {
  const int d = 3, L = 3;
  const auto states = evolve(product_state(L, d * d), zdzd(d), 4);
  for (int t = 0; t <= 4; ++t) {
    const OracleResult o = analytic_oracle_zdzd(d, t);
    const PureState m = state_from_mps(o.mps, L);
    const double overlap = std::abs(m.amplitudes.dot(states[t].amplitudes)) / m.amplitudes.norm();
    EXPECT_NEAR(overlap, 1.0, 1e-10) << t;
    EXPECT_EQ(o.reduced_bond, d / std::gcd(d, t));
  }
}

TEST(Dynamics, MpsApplyMatchesEvolution) {
  const SymmetricMpu s = zdzd(2);
  const OracleResult o = analytic_oracle_zdzd(2, 0);
  const MpsTensor once = mps_apply_mpu(o.mps, *s.tensor);
  const auto states = evolve(product_state(3, 4), s, 1);
  const PureState m = state_from_mps(once, 3);
  EXPECT_NEAR(std::abs(m.amplitudes.dot(states[1].amplitudes)) / m.amplitudes.norm(), 1.0, 1e-10);
  const auto ts = transfer_spectrum(once);
  ASSERT_FALSE(ts.empty());
  for (size_t i = 1; i < ts.size(); ++i) EXPECT_GE(std::abs(ts[i - 1]), std::abs(ts[i]) - 1e-12);
}

TEST(Dynamics, DegeneracyProfileGroupsByGap) {
  EXPECT_EQ(degeneracy_profile({0.25, 0.25, 0.25, 0.25}), (std::vector<int>{4}));
  EXPECT_EQ(degeneracy_profile({0.4, 0.4, 0.1, 0.1, 1e-15}), (std::vector<int>{2, 2}));
  EXPECT_EQ(degeneracy_profile({0.5, 0.3, 0.2}), (std::vector<int>{1, 1, 1}));
  EXPECT_TRUE(all_divisible({4, 8}, 4));
  EXPECT_FALSE(all_divisible({4, 2}, 4));
}

TEST(Dynamics, CrossoverConventions) {
  // Constant series: residues cross at their first sample.
  EXPECT_NEAR(*crossover_time(std::vector<double>(9, 1.0), 2).t_star, 1.0, 1e-12);
  EXPECT_NEAR(*crossover_time(std::vector<double>(10, 1.0), 3).t_star, 1.5, 1e-12);
  // Odd steps descend linearly onto a flat even baseline, meeting at t = 10.
  std::vector<double> s(13);
  for (int t = 0; t <= 12; ++t) s[t] = t % 2 ? 1.0 - 0.1 * t : 0.0;
  EXPECT_NEAR(*crossover_time(s, 2).t_star, 10.0, 1e-9);
  // Always above: no crossing.
  for (int t = 0; t <= 12; ++t) s[t] = t % 2 ? 2.0 : 1.0;
  EXPECT_FALSE(crossover_time(s, 2).t_star.has_value());
}

TEST(Dynamics, PerturbationLowersCrossover) {
  std::vector<double> tstar;
  for (double h : {0.1, 0.2}) {
    const auto states = evolve(product_state(6, 4), zdzd(2, h), 40);
    std::vector<double> ent;
    for (const auto& pt : spectrum_series(states, 3, 1e-3)) ent.push_back(pt.entropy);
    const Crossover c = crossover_time(ent, 2);
    ASSERT_TRUE(c.t_star.has_value());
    tstar.push_back(*c.t_star);
  }
  EXPECT_LT(tstar[1], tstar[0]);
}

TEST(Dynamics, InhomogeneousStringSpi) {
  ModelParams p;
  p.n = 3;
  const SymmetricMpu b3 = instantiate("bilayer-swap", p);
  const Circuit c = circuit_from_standard_form(b3.sf, 6);
  const StringSpiResult r = inhomogeneous_string_spi(c, b3.rep, 1);
  ASSERT_TRUE(r.relative_spi.has_value());
  EXPECT_NEAR(*r.relative_spi, std::log(0.5), 1e-9);
  EXPECT_LT(r.position_spread, 1e-9);

  // Site-dependent symmetric gates leave the value unchanged.
  Rng rng(31);
  Circuit dis = c;
  GateLayer mid{-1, {}};
  for (int j = 0; j < 6; ++j) {
    CMatrix q = CMatrix::Zero(4, 4);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
    for (int k = 0; k < 4; ++k) q(k, k) = std::polar(1.0, ph(rng));
    mid.gates.push_back(q);
  }
  dis.layers.insert(dis.layers.begin() + 1, mid);
  const StringSpiResult rd = inhomogeneous_string_spi(dis, b3.rep, 1);
  ASSERT_TRUE(rd.relative_spi.has_value());
  EXPECT_NEAR(*rd.relative_spi, std::log(0.5), 1e-9);

  // A generic gate breaks the symmetry and the string no longer factorizes.
  Circuit bad = c;
  bad.layers.insert(bad.layers.begin() + 1, GateLayer{-1, std::vector<CMatrix>(6, random_unitary(4, rng))});
  try {
    inhomogeneous_string_spi(bad, b3.rep, 1);
    ADD_FAILURE() << "expected factorization_violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::factorization_violation);
  }
}
