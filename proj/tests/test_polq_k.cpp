#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qborel/polq.hpp>

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

PolEl random_pol(PolContext& pc, const std::vector<Weight>& ws, Rng& rng) {
  PolEl x(&pc);
  for (const Weight& w : ws) {
    const Irrep& v = pc.rep(w);
    for (int i = 0; i < v.dim(); ++i) {
      Vec row(v.dim());
      for (int j = 0; j < v.dim(); ++j) row(j) = rng.real();
      x += PolEl::matrix_coeff(&pc, w, Vec::Unit(v.dim(), i), row);
    }
  }
  return x;
}

El random_word(CtxPtr ctx, int maxdeg, Rng& rng) {
  El x = El::unit(ctx, Pres::Uqk);
  int deg = rng.uniform(maxdeg + 1);
  for (int i = 0; i < deg; ++i) {
    int kind = rng.uniform(3);
    int r = rng.uniform(ctx->rank());
    if (kind == 0)
      x *= El::E(ctx, Pres::Uqk, r);
    else if (kind == 1)
      x *= El::F(ctx, Pres::Uqk, r);
    else
      x *= El::Ka(ctx, Pres::Uqk, ctx->rd().fundamental(r));
  }
  return x;
}

double eval_mono(PolContext& pc, const PolEl& x, const Mono& m) {
  return x.evaluate(
      El::from_atoms(pc.uq(), Pres::Uqk, El::to_atoms(m)));
}

}  // namespace

TEST_CASE("evaluation pairs matrix coefficients with generators") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  for (int n_hw = 1; n_hw <= 3; ++n_hw) {
    const Irrep& v = pc.rep({n_hw});
    for (int i = 0; i < v.dim(); ++i)
      for (int j = 0; j < v.dim(); ++j) {
        PolEl u = PolEl::matrix_unit(&pc, {n_hw}, i, j);
        CHECK(u.evaluate(El::unit(&ctx, Pres::Uqk)) ==
              doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        // K_alpha eigenvalue q^n on the weight-n vector.
        double kv = u.evaluate(El::Ka(&ctx, Pres::Uqk, ctx.rd().alpha(0)));
        double expect = i == j ? std::pow(0.5, v.weight(j)[0]) : 0.0;
        CHECK(kv == doctest::Approx(expect).epsilon(1e-12));
      }
    // b evaluated on Cartan elements vanishes (bra and ket have distinct
    // weights for nonzero highest weight).
    PolEl b = PolEl::b_el(&pc, {n_hw});
    CHECK(std::abs(b.evaluate(El::Ka(&ctx, Pres::Uqk, {1}))) < 1e-12);
  }
}

TEST_CASE("clebsch-gordan decompositions have the right shape") {
  {
    UqContext ctx("A1");
    PolContext pc(&ctx, 0.5);
    auto triv = pc.cg({1}, {0});
    REQUIRE(triv.size() == 1);
    CHECK(triv[0].mu == Weight{1});
    CHECK((triv[0].isom - Mat::Identity(2, 2)).norm() < 1e-12);
    auto dec = pc.cg({1}, {1});
    REQUIRE(dec.size() == 2);
    std::vector<Weight> mus = {dec[0].mu, dec[1].mu};
    std::sort(mus.begin(), mus.end());
    CHECK(mus == std::vector<Weight>{{0}, {2}});
  }
  {
    UqContext ctx("A2");
    PolContext pc(&ctx, 0.5);
    auto dec = pc.cg({1, 0}, {1, 0});
    REQUIRE(dec.size() == 2);
    std::vector<Weight> mus = {dec[0].mu, dec[1].mu};
    std::sort(mus.begin(), mus.end());
    CHECK(mus == std::vector<Weight>{{0, 1}, {2, 0}});
    // Isometry and intertwining for each summand.
    const Irrep& va = pc.rep({1, 0});
    const Irrep& vb = pc.rep({1, 0});
    for (const auto& s : dec) {
      const Irrep& vm = pc.rep(s.mu);
      CHECK((s.isom.transpose() * s.isom -
             Mat::Identity(vm.dim(), vm.dim()))
                .norm() < 1e-10);
      for (int r = 0; r < 2; ++r) {
        Mat te = kron(va.Em(r), vb.Km(ctx.rd().alpha(r))) +
                 kron(Mat::Identity(va.dim(), va.dim()), vb.Em(r));
        Mat tf = kron(va.Fm(r), Mat::Identity(vb.dim(), vb.dim())) +
                 kron(va.Km(wneg(ctx.rd().alpha(r))), vb.Fm(r));
        CHECK((te * s.isom - s.isom * vm.Em(r)).norm() < 1e-10);
        CHECK((tf * s.isom - s.isom * vm.Fm(r)).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("products recombine through irreducible summands") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  Rng rng(11);
  PolEl y = random_pol(pc, {{1}, {2}}, rng);
  CHECK((PolEl::one(&pc) * y - y).norm() < 1e-12 * (1.0 + y.norm()));
  PolEl b1 = PolEl::b_el(&pc, {1});
  PolEl b2 = PolEl::b_el(&pc, {2});
  CHECK((b1 * b1 - b2).norm() < 1e-10);

  UqContext a2("A2");
  PolContext pa(&a2, 0.5);
  PolEl c10 = PolEl::b_el(&pa, {1, 0});
  PolEl c01 = PolEl::b_el(&pa, {0, 1});
  PolEl c11 = PolEl::b_el(&pa, {1, 1});
  CHECK((c10 * c01 - c11).norm() < 1e-10);
  CHECK((c01 * c10 - c11).norm() < 1e-10);
}

TEST_CASE("product is dual to the enveloping-algebra coproduct") {
  for (const char* label : {"A1", "A2"}) {
    UqContext ctx(label);
    PolContext pc(&ctx, 0.5);
    std::vector<Weight> ws;
    if (ctx.rank() == 1)
      ws = {{1}, {2}};
    else
      ws = {{1, 0}, {0, 1}};
    Rng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
      PolEl x = random_pol(pc, {ws[rng.uniform(ws.size())]}, rng);
      PolEl y = random_pol(pc, {ws[rng.uniform(ws.size())]}, rng);
      El big = random_word(&ctx, 3, rng);
      double lhs = (x * y).evaluate(big);
      double rhs = 0.0;
      TensorEl dx = coproduct(big);
      for (const auto& [mm, c] : dx.terms())
        rhs += ctx.to_double(c, 0.5) * eval_mono(pc, x, mm.first) *
               eval_mono(pc, y, mm.second);
      CHECK(std::abs(lhs - rhs) <
            1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
  }
}

TEST_CASE("star is an involution compatible with the antipode") {
  for (const char* label : {"A1", "A2"}) {
    UqContext ctx(label);
    PolContext pc(&ctx, 0.5);
    CHECK((PolEl::one(&pc).star() - PolEl::one(&pc)).norm() < 1e-12);
    std::vector<Weight> ws;
    if (ctx.rank() == 1)
      ws = {{1}, {2}};
    else
      ws = {{1, 0}, {1, 1}};
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
      PolEl x = random_pol(pc, {ws[rng.uniform(ws.size())]}, rng);
      CHECK((x.star().star() - x).norm() < 1e-8 * (1.0 + x.norm()));
      El big = random_word(&ctx, 2, rng);
      double lhs = x.star().evaluate(big);
      double rhs = x.evaluate(star(antipode(big)));
      CHECK(std::abs(lhs - rhs) <
            1e-8 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
  }
}

TEST_CASE("haar state picks the trivial component and solves invariance") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  CHECK(PolEl::one(&pc).haar() == doctest::Approx(1.0));
  CHECK(PolEl::matrix_unit(&pc, {1}, 0, 0).haar() == 0.0);
  auto h = haar_oracle(&pc, dominant_box(ctx.rd(), {2}));
  // The oracle reproduces the trivial-component functional.
  for (const auto& [w, m] : h) {
    if (wis_zero(w)) continue;
    CHECK(m.norm() < 1e-10);
  }
  // Invariance on a spanning set: (id (x) h) Delta(x) = h(x) 1.
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    PolEl x = random_pol(pc, {{1}, {2}}, rng);
    PolEl slice(&pc);
    auto dx = x.coproduct();
    for (const auto& [l, r] : dx) slice += apply_functional(h, r) * l;
    PolEl rhs = apply_functional(h, x) * PolEl::one(&pc);
    CHECK((slice - rhs).norm() < 1e-10 * (1.0 + x.norm()));
  }
}

TEST_CASE("orthogonality constants are uniform within a block") {
  struct Case {
    const char* label;
    Weight w;
  };
  for (const Case& c : {Case{"A1", {1}}, Case{"A1", {2}}, Case{"A2", {1, 0}}}) {
    UqContext ctx(c.label);
    PolContext pc(&ctx, 0.5);
    const Irrep& v = pc.rep(c.w);
    int d = v.dim();
    double cval = 0.0;
    bool have = false;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double val = (PolEl::matrix_unit(&pc, c.w, i, j).star() *
                          PolEl::matrix_unit(&pc, c.w, k, l))
                             .haar();
            if (i != k || j != l) {
              CHECK(std::abs(val) < 1e-10);
              continue;
            }
            double base = pc.qpow(
                -2 * ctx.rd().pairing(ctx.rd().rho(), v.weight(i)));
            double ratio = val / base;
            if (!have) {
              cval = ratio;
              have = true;
            } else {
              CHECK(ratio == doctest::Approx(cval).epsilon(1e-10));
            }
          }
    CHECK(have);
    CHECK(cval > 0.0);
  }
}

TEST_CASE("the b elements are normal and satisfy the exchange relation") {
  for (const char* label : {"A1", "A2"}) {
    UqContext ctx(label);
    PolContext pc(&ctx, 0.5);
    Weight w1 = ctx.rank() == 1 ? Weight{1} : Weight{1, 0};
    PolEl b = PolEl::b_el(&pc, w1);
    CHECK((b * b.star() - b.star() * b).norm() < 1e-10);
    // b x = q^{(w1, lwt x - w0 rwt x)} x b on bihomogeneous x.
    Rng rng(71);
    PolEl x = random_pol(pc, {w1}, rng);
    for (const auto& bc : x.bicomponents()) {
      double f = pc.qpow(ctx.rd().pairing(
          w1, wsub(bc.lwt, ctx.rd().w0_act(bc.rwt))));
      PolEl lhs = b * bc.part;
      PolEl rhs = f * (bc.part * b);
      CHECK((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }
  }
}

TEST_CASE("localized elements normal-order correctly") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  const RootDatum& rd = ctx.rd();
  LocEl one = LocEl::from_pol(PolEl::one(&pc));
  CHECK((LocEl::babs_el(&pc, wzero(1)) - one).norm() < 1e-14);
  // |b|_w |b|_x = |b|_{w+x}.
  LocEl p = LocEl::babs_el(&pc, {1}) * LocEl::babs_el(&pc, {2});
  CHECK((p - LocEl::babs_el(&pc, {3})).norm() < 1e-14);
  // |b|_w x = q^{(w, lwt - w0 rwt)} x |b|_w.
  Rng rng(3);
  PolEl x = random_pol(pc, {{1}}, rng);
  for (const auto& bc : x.bicomponents()) {
    LocEl lhs = LocEl::babs_el(&pc, {1}) * LocEl::from_pol(bc.part);
    double f = pc.qpow(
        rd.pairing({1}, wsub(bc.lwt, rd.w0_act(bc.rwt))));
    LocEl rhs = f * (LocEl::from_pol(bc.part) * LocEl::babs_el(&pc, {1}));
    CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
  }
  // u is central and unitary: u_w u_{-w} = 1, u x = x u.
  LocEl u = LocEl::u_el(&pc, {1});
  CHECK((u * LocEl::u_el(&pc, {-1}) - one).norm() < 1e-14);
  LocEl xl = LocEl::from_pol(x);
  CHECK((u * xl - xl * u).norm() < 1e-12 * (1.0 + xl.norm()));
  CHECK((u.star() - LocEl::u_el(&pc, {-1})).norm() < 1e-14);
  // Star is an involution on localized elements.
  LocEl mix = LocEl::b_formal(&pc, {1}) * xl;
  CHECK((mix.star().star() - mix).norm() < 1e-8 * (1.0 + mix.norm()));
}

TEST_CASE("the haar state satisfies the modular exchange rule") {
  UqContext ctx("A1");
  PolContext pc(&ctx, 0.5);
  const RootDatum& rd = ctx.rd();
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    PolEl x = random_pol(pc, {{1}, {2}}, rng);
    PolEl y = random_pol(pc, {{1}, {2}}, rng);
    PolEl sy(&pc);
    for (const auto& bc : y.bicomponents())
      sy += pc.qpow(2 * rd.pairing(rd.rho(), wadd(bc.lwt, bc.rwt))) * bc.part;
    double lhs = (x * sy).haar();
    double rhs = (y * x).haar();
    CHECK(std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(lhs) + std::abs(rhs)));
  }
}
