#include "heislab/ncalg.hpp"

#include <cstdint>
#include <vector>

#include "doctest.h"

using namespace heislab::ncalg;

namespace {

// Deterministic word generator for the property checks.
struct WordGen {
  std::uint64_t state;
  explicit WordGen(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  Atom atom() {
    switch (next() % 8) {
      case 0: return {Gen::Z, 0};
      case 1: return {Gen::Zb, 0};
      case 2: return {Gen::T, 0};
      case 3: return {Gen::L, 0};
      case 4: return {Gen::Lb, 0};
      case 5: return {Gen::Phi, 0};
      case 6: return {Gen::Phi, 1};
      default: return {Gen::Phi, 2};
    }
  }
  Word word(int maxlen) {
    Word w;
    int len = 1 + static_cast<int>(next() % maxlen);
    for (int i = 0; i < len; ++i) w.push_back(atom());
    return w;
  }
};

NCExpr lb_zk_zbj_l(int zk, int zbj, const mpq_class& c) {
  Word w;
  w.push_back({Gen::Lb, 0});
  w.insert(w.end(), zk, Atom{Gen::Z, 0});
  w.insert(w.end(), zbj, Atom{Gen::Zb, 0});
  w.push_back({Gen::L, 0});
  return NCExpr::from_word(w, RatPoly(c));
}

}  // namespace

TEST_CASE("relation table basics") {
  CHECK(commutator(NCExpr::l(), NCExpr::lb()) == NCExpr::t().scaled(RatPoly(2)));
  CHECK(commutator(NCExpr::l(), NCExpr::lb()).str() == "2 T");
  CHECK(commutator(NCExpr::t(), NCExpr::l()).is_zero());
  CHECK(commutator(NCExpr::t(), NCExpr::lb()).is_zero());
  CHECK(commutator(NCExpr::l(), NCExpr::z()) == NCExpr::one());
  CHECK(commutator(NCExpr::l(), NCExpr::zb()).is_zero());
  CHECK(commutator(NCExpr::lb(), NCExpr::zb()) == NCExpr::one());
  CHECK(commutator(NCExpr::lb(), NCExpr::z()).is_zero());
  CHECK(commutator(NCExpr::t(), NCExpr::phi(0)) == NCExpr::phi(1));
  CHECK(commutator(NCExpr::l(), NCExpr::phi(2)) ==
        -(NCExpr::zb() * NCExpr::phi(3)));
  CHECK(commutator(NCExpr::lb(), NCExpr::phi(0)) == NCExpr::z() * NCExpr::phi(1));
}

TEST_CASE("normal ordering rewrites and idempotence") {
  // Lb L is out of order; canonical form comes from [L, Lb] = 2T.
  NCExpr lbl = NCExpr::from_word({Atom{Gen::Lb, 0}, Atom{Gen::L, 0}});
  CHECK(lbl == NCExpr::l() * NCExpr::lb() - NCExpr::t().scaled(RatPoly(2)));
  NCExpr lz = NCExpr::from_word({Atom{Gen::L, 0}, Atom{Gen::Z, 0}});
  CHECK(lz == NCExpr::z() * NCExpr::l() + NCExpr::one());
  // An already-canonical word passes through unchanged.
  Word canon{Atom{Gen::Z, 0}, Atom{Gen::Zb, 0}, Atom{Gen::T, 0}, Atom{Gen::L, 0}};
  NCExpr e = NCExpr::from_word(canon);
  REQUIRE(e.terms().size() == 1);
  CHECK(e.terms().begin()->first == canon);
}

TEST_CASE("jacobi identity vanishes exactly") {
  WordGen g(0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < 200; ++trial) {
    NCExpr a = NCExpr::from_word(g.word(3));
    NCExpr b = NCExpr::from_word(g.word(3));
    NCExpr c = NCExpr::from_word(g.word(3));
    NCExpr jac = commutator(commutator(a, b), c) + commutator(commutator(b, c), a) +
                 commutator(commutator(c, a), b);
    REQUIRE(jac.is_zero());
  }
}

TEST_CASE("confluence of products") {
  WordGen g(42);
  for (int trial = 0; trial < 100; ++trial) {
    Word w1 = g.word(4), w2 = g.word(4);
    Word cat = w1;
    cat.insert(cat.end(), w2.begin(), w2.end());
    REQUIRE(NCExpr::from_word(cat) == NCExpr::from_word(w1) * NCExpr::from_word(w2));
  }
}

TEST_CASE("bracket towers") {
  // [zb L, Lb] = 2 zb T - L
  NCExpr a11 = bracket_tower(1, 1);
  CHECK(a11 == NCExpr::zb() * NCExpr::t().scaled(RatPoly(2)) - NCExpr::l());
  CHECK(bracket_tower(1, 2) == NCExpr::t().scaled(RatPoly(-4)));
  CHECK(bracket_tower(0, 1) == NCExpr::t().scaled(RatPoly(2)));
}

TEST_CASE("span ranks at the origin") {
  for (int k = 0; k <= 4; ++k) {
    std::vector<NCExpr> full{NCExpr::lb(), bracket_tower(k, k), bracket_tower(k, k + 1)};
    CHECK(span_rank_at_origin(full) == 3);
    std::vector<NCExpr> short_tower{NCExpr::lb(), x1k(k)};
    for (int j = 1; j < k; ++j) short_tower.push_back(bracket_tower(k, j));
    if (k > 0) CHECK(span_rank_at_origin(short_tower) < 3);
  }
  CHECK(span_rank_at_origin({NCExpr::l(), NCExpr::lb()}) == 2);
  CHECK(span_rank_at_origin({NCExpr::zb() * NCExpr::l()}) == 0);
}

TEST_CASE("E_k expansion and adjoint symmetry") {
  NCExpr e0 = ek_expand(0);
  CHECK(e0 == NCExpr::t().scaled(RatPoly(2)) -
                  (NCExpr::l() * NCExpr::lb()).scaled(RatPoly(2)));
  for (int k = 0; k <= 4; ++k) {
    NCExpr ek = ek_expand(k);
    CHECK(ek.adjoint() == ek);
  }
}

TEST_CASE("reduction against the exponential eigenstate") {
  {
    HState s = apply_to_h(NCExpr::l());
    int a, b;
    RatPoly c;
    REQUIRE(s.single_monomial(a, b, c));
    CHECK(a == 0);
    CHECK(b == 1);
    CHECK(c == RatPoly::monomial(-2, 1));
  }
  CHECK(apply_to_h(NCExpr::lb()).is_zero());
  {
    HState s = apply_to_h(NCExpr::t());
    int a, b;
    RatPoly c;
    REQUIRE(s.single_monomial(a, b, c));
    CHECK(a == 0);
    CHECK(b == 0);
    CHECK(c == RatPoly::monomial(1, 1));
  }
  // E_k h = +2(k+1) q (z zb)^k h; the positive sign is forced by the
  // nonnegativity of the associated form.
  for (int k = 0; k <= 4; ++k) {
    HState s = apply_to_h(ek_expand(k));
    int a, b;
    RatPoly c;
    REQUIRE(s.single_monomial(a, b, c));
    CHECK(a == k);
    CHECK(b == k);
    CHECK(c == RatPoly::monomial(2 * (k + 1), 1));
  }
}

TEST_CASE("balanced localization: small case and relations") {
  NCExpr t10 = t_localization(1, 0);
  CHECK(t10 == NCExpr::t() * NCExpr::phi(0) + NCExpr::l() * NCExpr::z() * NCExpr::phi(1));

  for (auto [p1, p2] : std::vector<std::pair<int, int>>{
           {1, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 2}, {3, 3}}) {
    LocalizationReport rep = verify_31(p1, p2);
    CAPTURE(p1);
    CAPTURE(p2);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CHECK((c.exact || c.residual_matches));
    }
    // z and zb relations are exact operator identities.
    CHECK(rep.checks[0].exact);
    CHECK(rep.checks[1].exact);
    // With all T-powers on one side to begin with, every residual term of
    // the L (resp. Lb) relation is terminal.
    if (p2 == 0) CHECK(rep.checks[2].relocalized_terms == 0);
    if (p1 == 0) CHECK(rep.checks[3].relocalized_terms == 0);
  }
  CHECK_THROWS(verify_31(4, 3));
}

TEST_CASE("displayed operator expansion, line by line") {
  for (int k = 1; k <= 3; ++k) {
    S11Report rep = verify_s11_expansion(k);
    REQUIRE(rep.lines.size() == 3);
    // First displayed line carries a sign slip; the corrected sign closes it.
    CHECK(!rep.lines[0].zero);
    CHECK(rep.corrected_first_line_zero);
    NCExpr expected_gap = lb_zk_zbj_l(k, k - 1, 2 * mpq_class(k));
    CHECK(rep.lines[0].residual == expected_gap.str());
    // The middle line closes only at k = 1; the final line is exact.
    CHECK(rep.lines[1].zero == (k == 1));
    CHECK(rep.lines[2].zero);
  }
}
