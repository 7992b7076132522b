#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qborel/ampl.hpp>

#include <cmath>
#include <vector>

using namespace qb;

namespace {

struct Rng {
  unsigned long long s;
  explicit Rng(unsigned long long seed) : s(seed) {}
  unsigned long long next() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return s >> 17;
  }
  int uniform(int n) { return static_cast<int>(next() % n); }
  double real() { return (static_cast<double>(next() % 2000001) - 1e6) / 1e6; }
};

PolEl random_pol(PolContext& pc, const Weight& w, Rng& rng) {
  const Irrep& v = pc.rep(w);
  PolEl x(&pc);
  for (int i = 0; i < v.dim(); ++i) {
    Vec row(v.dim());
    for (int j = 0; j < v.dim(); ++j) row(j) = rng.real();
    x += PolEl::matrix_coeff(&pc, w, Vec::Unit(v.dim(), i), row);
  }
  return x;
}

AmpEl random_supported(PolContext& pc, Flavor fl,
                       const std::vector<Weight>& ws, Rng& rng) {
  AmpEl a(&pc, fl);
  for (int t = 0; t < 2; ++t) {
    Weight chi(pc.rd().rank());
    for (auto& c : chi) c = rng.uniform(3) - 1;
    a += AmpEl::delta(&pc, fl, random_pol(pc, ws[rng.uniform(ws.size())], rng),
                      chi);
  }
  return a;
}

El random_borel(CtxPtr ctx, int maxdeg, Rng& rng) {
  El x = El::unit(ctx, Pres::UqPlus);
  int deg = rng.uniform(maxdeg + 1);
  for (int i = 0; i < deg; ++i) {
    int kind = rng.uniform(4);
    int r = rng.uniform(ctx->rank());
    if (kind == 0)
      x *= El::E(ctx, Pres::UqPlus, r);
    else if (kind == 1)
      x *= El::F(ctx, Pres::UqPlus, r);
    else if (kind == 2)
      x *= El::Ka(ctx, Pres::UqPlus, ctx->rd().fundamental(r));
    else
      x *= El::Kb(ctx, Pres::UqPlus, ctx->rd().fundamental(r));
  }
  return x;
}

}  // namespace

TEST_CASE("products follow the interchange relations") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  const RootDatum& rd = ctx.rd();
  for (Flavor fl : {Flavor::Plus, Flavor::Zero}) {
    AmpEl d0 = AmpEl::delta(&pc, fl, PolEl::one(&pc), {0});
    CHECK((d0 * d0 - d0).norm() < 1e-14);
    // delta_chi x = x delta_{chi + shift(x)} on bihomogeneous x.
    const Irrep& v = pc.rep({2});
    for (int i = 0; i < v.dim(); ++i)
      for (int j = 0; j < v.dim(); ++j) {
        PolEl x = PolEl::matrix_unit(&pc, {2}, i, j);
        Weight chi = {1};
        AmpEl lhs = AmpEl::delta(&pc, fl, PolEl::one(&pc), chi) *
                    AmpEl::term(&pc, fl, x, FAtom{FAtom::Zchar, {0}});
        Weight s = fl == Flavor::Plus ? wsub(v.weight(i), v.weight(j))
                                      : v.weight(i);
        AmpEl rhs = AmpEl::delta(&pc, fl, x, wadd(chi, s));
        CHECK((lhs - rhs).norm() < 1e-12);
      }
  }
  // z_w b = q^{-(w, lwt b)} b z_w in flavor 0.
  PolEl b = PolEl::b_el(&pc, {1});
  AmpEl z = AmpEl::z_el(&pc, Flavor::Zero, {1});
  AmpEl bz = AmpEl::term(&pc, Flavor::Zero, b, FAtom{FAtom::Zchar, {0}});
  double f = pc.qpow(-rd.pairing({1}, {1}));
  CHECK((z * bz - f * (bz * z)).norm() < 1e-12);
}

TEST_CASE("star is an involution and fixes the z multipliers") {
  UqContext ctx("A2");
  PolContext pc(&ctx, 0.5);
  Rng rng(9);
  for (Flavor fl : {Flavor::Plus, Flavor::Zero}) {
    AmpEl z = AmpEl::z_el(&pc, fl, {1, -1});
    CHECK((z.star() - z).norm() < 1e-14);
    AmpEl a = random_supported(pc, fl, {{1, 0}, {0, 1}}, rng);
    CHECK((a.star().star() - a).norm() < 1e-8 * (1.0 + a.norm()));
  }
}

TEST_CASE("the borel pairing is a bialgebra pairing") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  Rng rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    AmpEl a = random_supported(pc, Flavor::Plus, {{1}, {2}}, rng);
    AmpEl b = random_supported(pc, Flavor::Plus, {{1}, {2}}, rng);
    El big = random_borel(&ctx, 2, rng);
    double lhs = (a * b).pair_borel(big);
    double rhs = 0.0;
    TensorEl dx = coproduct(big);
    for (const auto& [mm, c] : dx.terms())
      rhs += ctx.to_double(c, 0.5) *
             a.pair_borel(
                 El::from_atoms(&ctx, Pres::UqPlus, El::to_atoms(mm.first))) *
             b.pair_borel(
                 El::from_atoms(&ctx, Pres::UqPlus, El::to_atoms(mm.second)));
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
}

TEST_CASE("covered coproduct: convolution pattern and counit") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  // Group-like convolution on the function part.
  AmpEl a = AmpEl::delta(&pc, Flavor::Plus, PolEl::one(&pc), {3});
  AmpEl cover = AmpEl::delta(&pc, Flavor::Plus, PolEl::one(&pc), {1});
  auto dec = coproduct_cover(a, cover);
  REQUIRE(dec.size() == 1);
  CHECK((dec[0].first -
         AmpEl::delta(&pc, Flavor::Plus, PolEl::one(&pc), {2}))
            .norm() < 1e-14);
  CHECK((dec[0].second - cover).norm() < 1e-14);
  // Counit slice: (eps (x) id)(Delta(a)(1 (x) b)) = a b.
  Rng rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    AmpEl x = random_supported(pc, Flavor::Plus, {{1}, {2}}, rng);
    AmpEl y = random_supported(pc, Flavor::Plus, {{1}}, rng);
    AmpEl acc(&pc, Flavor::Plus);
    for (const auto& [l, r] : coproduct_cover(x, y)) acc += l.counit() * r;
    AmpEl prod = x * y;
    CHECK((acc - prod).norm() < 1e-9 * (1.0 + prod.norm()));
  }
}

TEST_CASE("slicing the covered coproduct reproduces the translation action") {
  for (Flavor fl : {Flavor::Plus, Flavor::Zero}) {
    UqContext ctx("A1");
    PolContext pc(&ctx, 0.5);
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      AmpEl a = random_supported(pc, fl, {{1}, {2}}, rng);
      AmpEl b = random_supported(pc, fl, {{1}}, rng);
      El big = random_borel(&ctx, 2, rng);
      // (X (x) id)(Delta(a)(1 (x) b)) = (a <| X) b.
      AmpEl acc(&pc, fl);
      for (const auto& [l, r] : coproduct_cover(a, b))
        acc += l.pair_borel(big) * r;
      AmpEl direct = a.act_right(big) * b;
      CHECK((acc - direct).norm() < 1e-9 * (1.0 + direct.norm()));
    }
  }
}

TEST_CASE("translation actions compose and respect products and star") {
  UqContext ctx("A2");
  PolContext pc(&ctx, 0.5);
  Rng rng(53);
  std::vector<Weight> ws = {{1, 0}, {0, 1}};
  for (int trial = 0; trial < 8; ++trial) {
    AmpEl a = random_supported(pc, Flavor::Zero, ws, rng);
    El x = random_borel(&ctx, 2, rng);
    El y = random_borel(&ctx, 2, rng);
    // Unit acts trivially.
    CHECK((a.act_right(El::unit(&ctx, Pres::UqPlus)) - a).norm() < 1e-14);
    // x <| (Y X) = (x <| Y) <| X.
    AmpEl lhs = a.act_right(y * x);
    AmpEl rhs = a.act_right(y).act_right(x);
    CHECK((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));
    // Module algebra: (ab) <| X = (a <| X_(1))(b <| X_(2)).
    AmpEl b = random_supported(pc, Flavor::Zero, ws, rng);
    AmpEl prod = (a * b).act_right(x);
    AmpEl split(&pc, Flavor::Zero);
    TensorEl dx = coproduct(x);
    for (const auto& [mm, c] : dx.terms())
      split += ctx.to_double(c, 0.5) *
               (a.act_right(El::from_atoms(&ctx, Pres::UqPlus,
                                           El::to_atoms(mm.first))) *
                b.act_right(El::from_atoms(&ctx, Pres::UqPlus,
                                           El::to_atoms(mm.second))));
    CHECK((prod - split).norm() < 1e-9 * (1.0 + prod.norm()));
    // Star compatibility: (a <| X)^* = a^* <| S(X)^*.
    AmpEl sl = a.act_right(x).star();
    AmpEl sr = a.star().act_right(star(antipode(x)));
    CHECK((sl - sr).norm() < 1e-9 * (1.0 + sl.norm()));
  }
}

TEST_CASE("generator translations shift supports as displayed") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  const RootDatum& rd = ctx.rd();
  PolEl b = PolEl::b_el(&pc, {1});
  AmpEl a = AmpEl::delta(&pc, Flavor::Plus, b, {0});
  // K_w acts diagonally and shifts the support by -w.
  AmpEl ak = a.act_right(El::Ka(&ctx, Pres::UqPlus, {1}));
  REQUIRE(ak.terms().size() == 1);
  CHECK(ak.terms().begin()->first.kind == FAtom::Delta);
  CHECK(ak.terms().begin()->first.w == Weight{-1});
  // E_r turns the highest weight bra and shifts by -alpha_r.
  AmpEl ae = a.act_right(El::E(&ctx, Pres::UqPlus, 0));
  REQUIRE(ae.terms().size() == 1);
  CHECK(ae.terms().begin()->first.w == wneg(rd.alpha(0)));
  CHECK(ae.terms().begin()->second.norm() > 1e-6);
}

TEST_CASE("invariant integrals are normalized, additive and positive") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  AmpEl one0 = AmpEl::delta(&pc, Flavor::Plus, PolEl::one(&pc), {0});
  CHECK(one0.integral() == doctest::Approx(1.0));
  AmpEl two = one0 + AmpEl::delta(&pc, Flavor::Plus, PolEl::one(&pc), {2});
  CHECK(two.integral() == doctest::Approx(2.0));
  Rng rng(61);
  for (int trial = 0; trial < 15; ++trial) {
    AmpEl a = random_supported(pc, Flavor::Zero, {{1}, {2}}, rng);
    CHECK((a.star() * a).integral() >= -1e-10);
  }
}

TEST_CASE("integral invariance for both flavors") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  Rng rng(73);
  for (int trial = 0; trial < 6; ++trial) {
    // Flavor +: (psi (x) id)(Delta(a)(1 (x) b)) = psi(a) b.
    AmpEl a = random_supported(pc, Flavor::Plus, {{1}, {2}}, rng);
    AmpEl b = random_supported(pc, Flavor::Plus, {{1}}, rng);
    AmpEl acc(&pc, Flavor::Plus);
    for (const auto& [l, r] : coproduct_cover(a, b)) acc += l.integral() * r;
    AmpEl rhs = a.integral() * b;
    CHECK((acc - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
    // Flavor 0: (psi^+ (x) id)(gamma(a)(1 (x) b)) = psi^0(a) b.
    AmpEl a0 = random_supported(pc, Flavor::Zero, {{1}, {2}}, rng);
    AmpEl b0 = random_supported(pc, Flavor::Zero, {{1}}, rng);
    AmpEl acc0(&pc, Flavor::Zero);
    for (const auto& [l, r] : coproduct_cover(a0, b0))
      acc0 += l.integral() * r;
    AmpEl rhs0 = a0.integral() * b0;
    CHECK((acc0 - rhs0).norm() < 1e-9 * (1.0 + rhs0.norm()));
  }
}
