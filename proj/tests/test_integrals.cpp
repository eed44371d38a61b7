// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>
#include <sstream>

#include "support.hpp"
#include "vqeac/errors.hpp"
#include "vqeac/integrals.hpp"

using namespace vqeac;
using Catch::Approx;

namespace {

const char* kOneOrbital =
    " &FCI NORB=1,NELEC=2,MS2=0,\n"
    "  ORBSYM=1,\n"
    "  ISYM=1,\n"
    " &END\n"
    "  0.5  1 1 1 1\n"
    " -1.0  1 1 0 0\n"
    "  0.3  0 0 0 0\n";

IntegralSet parse(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

}  // namespace

TEST_CASE("one-orbital closed-shell energy", "[integrals]") {
  const IntegralSet ints = parse(kOneOrbital);
  CHECK(ints.n_orb == 1);
  CHECK(ints.n_elec == 2);
  CHECK(ints.core_energy == Approx(0.3));
  CHECK(determinant_energy(ints, {0}, {0}) == Approx(-1.2).margin(1e-14));
}

TEST_CASE("missing NORB names the key", "[integrals]") {
  const std::string text = " &FCI NELEC=2,MS2=0,\n &END\n 0.5 1 1 1 1\n";
  try {
    parse(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("NORB") != std::string::npos);
    CHECK(e.line() > 0);
  }
}

TEST_CASE("malformed records report their line", "[integrals]") {
  const std::string text =
      " &FCI NORB=1,NELEC=2,MS2=0,\n &END\n 0.5 1 1 1 1\n 0.2 1 x 0 0\n";
  try {
    parse(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("index out of range is a bounds error", "[integrals]") {
  const std::string text = " &FCI NORB=1,NELEC=2,MS2=0,\n &END\n 0.5 2 1 1 1\n";
  CHECK_THROWS_AS(parse(text), BoundsError);
}

TEST_CASE("conflicting duplicates are a consistency error", "[integrals]") {
  const std::string bad =
      " &FCI NORB=2,NELEC=2,MS2=0,\n &END\n 0.5 1 2 1 2\n 0.6 2 1 2 1\n";
  CHECK_THROWS_AS(parse(bad), ConsistencyError);
  const std::string ok =
      " &FCI NORB=2,NELEC=2,MS2=0,\n &END\n 0.5 1 2 1 2\n 0.5 2 1 2 1\n";
  CHECK_NOTHROW(parse(ok));
}

TEST_CASE("all 8 images of a stored integral are readable", "[integrals]") {
  const std::string text =
      " &FCI NORB=4,NELEC=2,MS2=0,\n &END\n 0.125 1 2 3 4\n";
  const IntegralSet ints = parse(text);
  const int p = 0, q = 1, r = 2, s = 3;
  for (auto [a, b, c, d] :
       {std::array{p, q, r, s}, {q, p, r, s}, {p, q, s, r}, {q, p, s, r},
        {r, s, p, q}, {s, r, p, q}, {r, s, q, p}, {s, r, q, p}})
    CHECK(ints.v(a, b, c, d) == 0.125);
  CHECK(ints.v(p, r, q, s) == 0.0);
}

TEST_CASE("fixture HF energies match their sidecars", "[integrals][fixtures]") {
  for (const char* name :
       {"h2_sto3g_0.735", "h2_631g_0.735", "h4_chain_sto3g_1.0",
        "h4_square_sto3g_0.9", "lih_sto3g_1.6", "beh2_sto3g_1.33",
        "n2_sto3g_1.1", "n2_ccpvdz_2.5"}) {
    INFO(name);
    const IntegralSet ints = testing::load(name);
    const FixtureMeta meta = load_fixture_meta(testing::fixture_meta(name));
    CHECK(meta.engine == "pyscf");
    CHECK_FALSE(meta.generator_version.empty());
    CHECK(ints.core_energy == Approx(meta.nuclear_repulsion).margin(1e-10));
    CHECK(hf_energy(ints) == Approx(meta.hf_energy).margin(1e-8));
  }
}

TEST_CASE("fixture integrals satisfy the stored invariants", "[integrals][fixtures]") {
  for (const char* name : {"h2_631g_1.5", "lih_sto3g_2.0", "n2_sto3g_2.5"}) {
    INFO(name);
    const IntegralSet ints = testing::load(name);
    CHECK((ints.h - ints.h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ints.n_elec <= 2 * ints.n_orb);
    CHECK(EriTensor::symmetry_residual(ints.n_orb, ints.v.dense()) == 0.0);
  }
}

TEST_CASE("embedding limits", "[integrals]") {
  const IntegralSet ints = testing::load("lih_sto3g_1.6");
  SECTION("no inactive orbitals") {
    const ActiveSpace cas = ActiveSpace::full(ints);
    const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
    CHECK(emb.e_core == ints.core_energy);
    CHECK((emb.h_eff - ints.h).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("all occupied orbitals inactive") {
    const ActiveSpace cas = ActiveSpace::from_counts(ints, 0, 0);
    const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
    CHECK(emb.n_act == 0);
    CHECK(emb.e_core == Approx(hf_energy(ints)).margin(1e-10));
  }
  SECTION("bad electron count") {
    ActiveSpace cas = ActiveSpace::from_counts(ints, 2, 2);
    cas.n_act_elec = 6;
    CHECK_THROWS_AS(embed_active_space(ints, cas), DomainError);
  }
}

TEST_CASE("embedded HF energy equals the full-space determinant energy",
          "[integrals]") {
  // Oracle: reference determinant energy evaluated once in the full space
  // and once as e_core plus the active-space closed-shell formula.
  const IntegralSet ints = testing::load("n2_sto3g_1.1");
  const ActiveSpace cas = ActiveSpace::from_counts(ints, 6, 6);
  const EmbeddedHamiltonian emb = embed_active_space(ints, cas);
  double e = emb.e_core;
  const int nocc = cas.n_act_elec / 2;
  for (int i = 0; i < nocc; ++i) {
    e += 2.0 * emb.h_eff(i, i);
    for (int j = 0; j < nocc; ++j)
      e += 2.0 * emb.v_act(i, i, j, j) - emb.v_act(i, j, j, i);
  }
  CHECK(e == Approx(hf_energy(ints)).margin(1e-10));
}

TEST_CASE("orbital rotations", "[integrals]") {
  const IntegralSet ints = testing::load("h4_chain_sto3g_1.0");
  const int n = ints.n_orb;
  std::mt19937_64 rng(7);

  SECTION("kappa = 0 is the identity") {
    const IntegralSet r = rotate_orbitals(ints, Mat::Zero(n, n));
    CHECK((r.h - ints.h).cwiseAbs().maxCoeff() < 1e-14);
    const auto a = r.v.dense(), b = ints.v.dense();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    CHECK(d < 1e-14);
    CHECK(r.core_energy == ints.core_energy);
  }
  SECTION("round trip") {
    const Mat k = testing::random_antisymmetric(n, 0.4, rng);
    const IntegralSet r = rotate_orbitals(rotate_orbitals(ints, k), -k);
    CHECK((r.h - ints.h).cwiseAbs().maxCoeff() < 1e-10);
    const auto a = r.v.dense(), b = ints.v.dense();
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    CHECK(d < 1e-10);
  }
  SECTION("symmetry preserved by the dense transform") {
    const Mat k = testing::random_antisymmetric(n, 0.4, rng);
    const auto t = transform_eri_dense(n, ints.v.dense(), antisymmetric_exp(k));
    CHECK(EriTensor::symmetry_residual(n, t) < 1e-10);
  }
  SECTION("non-antisymmetric kappa") {
    Mat k = Mat::Zero(n, n);
    k(0, 1) = 0.1;
    CHECK_THROWS_AS(rotate_orbitals(ints, k), DomainError);
  }
}

TEST_CASE("four-index transform matches the naive contraction", "[integrals]") {
  // Oracle: direct n^8 sum over all four indices.
  const IntegralSet ints = testing::load("h2_631g_1.0");
  const int n = ints.n_orb;
  std::mt19937_64 rng(11);
  const Mat u = antisymmetric_exp(testing::random_antisymmetric(n, 0.7, rng));
  const auto fast = transform_eri_dense(n, ints.v.dense(), u);
  double worst = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                  acc += u(a, p) * u(b, q) * u(c, r) * u(d, s) * ints.v(a, b, c, d);
          worst = std::max(worst, std::abs(acc - fast[((p * n + q) * n + r) * n + s]));
        }
  CHECK(worst < 1e-12);
}
