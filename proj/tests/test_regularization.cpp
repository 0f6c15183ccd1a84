#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minres/regularization.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace minres;

namespace {

const Rectangle unit{0.0, 0.0, 1.0, 1.0};

double field_integral(const DiscreteField& f, const Triangulation& m, Index t) {
  return oracle::integrate(m, t, [&](const Point& x) { return evaluate(f, t, x); });
}

// <f, v> for a load with volume, gradient and point parts, using the
// degree-5 rule and the field's own point evaluation.
double pair_oracle(const Triangulation& m, const LoadFunctional& f, const DiscreteField& v, const PointLocator& loc) {
  double s = 0.0;
  for (Index t = 0; t < m.num_elements(); ++t) {
    s += oracle::integrate(m, t, [&](const Point& x) {
      double r = 0.0;
      if (f.volume) r += f.volume(x, t) * evaluate(v, t, x);
      if (f.gradient) r += f.gradient(x).dot(evaluate_gradient(v, t, x));
      return r;
    });
  }
  for (const PointMass& p : f.point_masses) s += p.mass * evaluate(v, loc.locate(p.position), p.position);
  return s;
}

}  // namespace

TEST_CASE("psi_z is biorthogonal to the hats") {
  std::mt19937 rng(3);
  for (MeshPattern p : {MeshPattern::Diagonal, MeshPattern::Crisscross}) {
    const Triangulation m = oracle::jiggled_mesh(5, unit, p, 0.2, rng);
    const BiorthogonalBasis basis(m);
    CHECK(basis.vertices.size() > 0);
    double worst = 0.0;
    for (Index z : basis.vertices) {
      const DiscreteField psi = basis.psi(m, z);
      for (Index zp = 0; zp < m.num_vertices(); ++zp) {
        double s = 0.0;
        for (Index t : m.vertex_elements(z)) {
          s += oracle::integrate(m, t, [&](const Point& x) { return evaluate(psi, t, x) * oracle::hat(m, zp, t, x); });
        }
        worst = std::max(worst, std::abs(s - (z == zp ? 1.0 : 0.0)));
      }
      // psi_z vanishes away from its patch
      for (Index t = 0; t < m.num_elements(); ++t) {
        if (std::find(m.vertex_elements(z).begin(), m.vertex_elements(z).end(), t) == m.vertex_elements(z).end()) {
          CHECK(evaluate(psi, t, m.centroid(t)) == 0.0);
        }
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("bubble normalization") {
  std::mt19937 rng(5);
  const Triangulation m = oracle::jiggled_mesh(4, unit, MeshPattern::Crisscross, 0.2, rng);
  for (Index t = 0; t < m.num_elements(); ++t) {
    const double g = bubble_normalization(m, t);
    const double s = oracle::integrate(m, t, [&](const Point& x) {
      const auto l = oracle::barycentric(m, t, x);
      return g * l[0] * l[1] * l[2];
    });
    CHECK(std::abs(s - 1.0) < 1e-13);
  }
  const Triangulation right({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  CHECK(bubble_normalization(right, 0) == doctest::Approx(120.0).epsilon(1e-15));
}

TEST_CASE("pairings with hats and bubbles") {
  const Triangulation m = make_structured_mesh(4, unit, MeshPattern::Diagonal);
  const LoadFunctional one = LoadFunctional::density([](const Point&) { return 1.0; });
  const BiorthogonalBasis basis(m);
  for (Index z : basis.vertices) {
    double patch = 0.0;
    for (Index t : m.vertex_elements(z)) patch += m.area(t);
    CHECK(pair_hat(m, one, z) == doctest::Approx(patch / 3.0).epsilon(1e-13));
    CHECK(pair_hat(m, LoadFunctional::dirac(m.vertex(z)), z) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const Vec2 g(0.7, -1.3);
  const LoadFunctional grad = LoadFunctional::gradient_form([g](const Point&) { return g; });
  for (Index z : basis.vertices) {
    double expected = 0.0;
    for (Index t : m.vertex_elements(z)) expected += g.dot(oracle::hat_gradient(m, z, t)) * m.area(t);
    CHECK(pair_hat(m, grad, z) == doctest::Approx(expected).epsilon(1e-12));
  }
  for (Index t = 0; t < m.num_elements(); ++t) {
    CHECK(pair_bubble(m, one, t) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(pair_bubble(m, LoadFunctional::dirac(m.centroid(t)), t) ==
          doctest::Approx(bubble_normalization(m, t) / 27.0).epsilon(1e-12));
    // constant gradients integrate to zero against a bubble
    CHECK(std::abs(pair_bubble(m, grad, t)) < 1e-10);
  }
}

TEST_CASE("J_h and P_h reproduce P1 fields vanishing on the boundary") {
  std::mt19937 rng(11);
  const Triangulation m = oracle::jiggled_mesh(5, unit, MeshPattern::Diagonal, 0.15, rng);
  const DiscreteField v = oracle::random_p1c(m, rng);
  CHECK((apply_Jh(v).coefficients - v.coefficients).lpNorm<Eigen::Infinity>() < 1e-12);
  const DiscreteField pv = apply_Ph(v);
  CHECK(pv.kind == SpaceKind::P1CBubble);
  CHECK(pv.coefficients.head(m.num_vertices()).isApprox(v.coefficients, 1e-12));
  CHECK(pv.coefficients.tail(m.num_elements()).lpNorm<Eigen::Infinity>() < 1e-12);

  const DiscreteField zero = apply_Jh(m, LoadFunctional::density([](const Point&) { return 0.0; }));
  CHECK(zero.coefficients.lpNorm<Eigen::Infinity>() == 0.0);

  const DiscreteField one = apply_Jh(m, LoadFunctional::density([](const Point&) { return 1.0; }));
  for (Index z = 0; z < m.num_vertices(); ++z) {
    CHECK(one.coefficients[z] == doctest::Approx(m.is_boundary_vertex(z) ? 0.0 : 1.0).epsilon(1e-12));
  }
}

TEST_CASE("(1 - P_h) v is orthogonal to piecewise constants") {
  std::mt19937 rng(13);
  const Triangulation m = oracle::jiggled_mesh(4, unit, MeshPattern::Crisscross, 0.15, rng);
  // v of degree 5 so both the library rule and the oracle integrate exactly
  auto v = [](const Point& x) { return x.x() * x.x() * x.x() * x.y() * x.y() - 2.0 * x.x() * x.y() + 0.5; };
  const DiscreteField pv = apply_Ph(m, LoadFunctional::density(v));
  for (Index t = 0; t < m.num_elements(); ++t) {
    const double a = oracle::integrate(m, t, v);
    CHECK(std::abs(field_integral(pv, m, t) - a) < 1e-12);
  }
}

TEST_CASE("Q_h and P_h' are idempotent on piecewise constants") {
  std::mt19937 rng(17);
  const Triangulation m = oracle::jiggled_mesh(4, unit, MeshPattern::Diagonal, 0.2, rng);
  double worst_q = 0.0, worst_p = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteField f = oracle::random_p0(m, rng);
    const LoadFunctional load = LoadFunctional::piecewise_constant(f);
    worst_q = std::max(worst_q, (apply_Qh(m, load).coefficients - f.coefficients).lpNorm<Eigen::Infinity>());
    const DiscreteField pf = apply_Ph_adjoint(m, load);
    for (Index t = 0; t < m.num_elements(); ++t) {
      for (int k = 0; k < 3; ++k) {
        worst_p = std::max(worst_p, std::abs(evaluate(pf, t, m.vertex(m.element(t)[k])) - f.coefficients[t]));
      }
    }
  }
  CHECK(worst_q < 1e-12);
  CHECK(worst_p < 1e-12);
}

TEST_CASE("adjoint identity <P_h' f, v> = <f, P_h v>") {
  std::mt19937 rng(19);
  const Triangulation m = oracle::jiggled_mesh(4, unit, MeshPattern::Diagonal, 0.2, rng);
  const PointLocator loc(m);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec2 g = oracle::random_vector(2, rng);
    LoadFunctional f = oracle::broken_p1_load(oracle::random_p1b(m, rng));
    if (trial % 2 == 0) f = f + LoadFunctional::gradient_form([g](const Point& x) { return Vec2(g + x); });
    if (trial % 3 == 0) f = f + LoadFunctional::dirac(Point(u(rng), u(rng)), 2.0 * u(rng) - 1.0);
    const DiscreteField v = oracle::random_p1b(m, rng);

    const DiscreteField pf = apply_Ph_adjoint(m, f);
    const double lhs = oracle::integrate(m, [&](const Point& x, Index t) { return evaluate(pf, t, x) * evaluate(v, t, x); });
    const DiscreteField pv = apply_Ph(v);
    const double rhs = pair_oracle(m, f, pv, loc);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("Clement identity P_h Pi0 v = J_Cl v + B_h(1 - J_Cl) v") {
  std::mt19937 rng(23);
  const Triangulation m = oracle::jiggled_mesh(5, unit, MeshPattern::Crisscross, 0.15, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector c = oracle::random_vector(4, rng);
    auto v = [c](const Point& x) {
      return c[0] * std::sin(3.0 * x.x() + c[1]) * std::cos(2.0 * x.y()) + c[2] * std::exp(x.x() * x.y()) + c[3];
    };
    const LoadFunctional load = LoadFunctional::density(v);
    const DiscreteField lhs = apply_Ph(project_p0(load, m));
    const DiscreteField rhs = add_bubble_correction(m, load, apply_clement(m, load));
    double worst = 0.0;
    for (Index t = 0; t < m.num_elements(); ++t) {
      for (const auto& node : oracle::degree5_rule()) {
        const Point x = oracle::point(m, t, node.lambda);
        worst = std::max(worst, std::abs(evaluate(lhs, t, x) - evaluate(rhs, t, x)));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("Clement nodal values are patch means") {
  const Triangulation m = make_structured_mesh(4, unit, MeshPattern::Diagonal);
  auto v = [](const Point& x) { return x.x() * x.x() + 3.0 * x.y(); };
  const DiscreteField c = apply_clement(m, LoadFunctional::density(v));
  for (Index z = 0; z < m.num_vertices(); ++z) {
    if (m.is_boundary_vertex(z)) {
      CHECK(c.coefficients[z] == 0.0);
      continue;
    }
    double s = 0.0, a = 0.0;
    for (Index t : m.vertex_elements(z)) {
      s += oracle::integrate(m, t, v);
      a += m.area(t);
    }
    CHECK(c.coefficients[z] == doctest::Approx(s / a).epsilon(1e-12));
  }
}

TEST_CASE("||Q_h delta|| and ||P_h' delta|| scale like 1/h") {
  const Point x0(0.3, 0.55);
  std::vector<double> q, p;
  for (Index n : {4, 8, 16, 32, 64, 128}) {
    const Triangulation m = make_structured_mesh(n, unit, MeshPattern::Diagonal);
    const LoadFunctional d = LoadFunctional::dirac(x0);
    const DiscreteField qd = apply_Qh(m, d);
    const DiscreteField pd = apply_Ph_adjoint(m, d);
    double sq = 0.0;
    for (Index t = 0; t < m.num_elements(); ++t) sq += qd.coefficients[t] * qd.coefficients[t] * m.area(t);
    q.push_back(std::sqrt(sq) * m.h_max());
    p.push_back(std::sqrt(oracle::integrate(m, [&](const Point& x, Index t) {
      const double e = evaluate(pd, t, x);
      return e * e;
    })) * m.h_max());
  }
  // with x0 at the same relative position in its element the products are
  // constant; in general they only stay bounded above and below
  for (std::size_t i = 1; i < q.size(); ++i) {
    CHECK(q[i] / q[i - 1] > 0.5);
    CHECK(q[i] / q[i - 1] < 2.0);
    CHECK(p[i] / p[i - 1] > 0.5);
    CHECK(p[i] / p[i - 1] < 2.0);
  }
}

TEST_CASE("local L2 boundedness of Q_h is stable under refinement") {
  std::mt19937 rng(29);
  std::vector<double> worst;
  for (Index n : {4, 8, 16}) {
    const Triangulation m = make_structured_mesh(n, unit, MeshPattern::Diagonal);
    double w = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const DiscreteField f = oracle::random_p1b(m, rng);
      const DiscreteField qf = apply_Qh(m, oracle::broken_p1_load(f));
      for (Index t = 0; t < m.num_elements(); ++t) {
        std::vector<Index> nb;
        for (Index v : m.element(t)) {
          for (Index s : m.vertex_elements(v)) {
            if (std::find(nb.begin(), nb.end(), s) == nb.end()) nb.push_back(s);
          }
        }
        double big = 0.0;
        for (Index s : nb) big += oracle::integrate(m, s, [&](const Point& x) { return std::pow(evaluate(f, s, x), 2); });
        const double small = qf.coefficients[t] * qf.coefficients[t] * m.area(t);
        w = std::max(w, std::sqrt(small / big));
      }
    }
    worst.push_back(w);
  }
  CHECK(worst[2] < 1.5 * worst[0]);
  CHECK(worst[1] < 1.5 * worst[0]);
}

TEST_CASE("surrogate H^-1 norm of (1 - Q_h) g decays at least like h") {
  auto g = [](const Point& x) { return std::exp(x.x()) * std::cos(2.0 * x.y()); };
  std::vector<double> e;
  for (Index n : {4, 8, 16}) {
    const Triangulation m = make_structured_mesh(n, unit, MeshPattern::Diagonal);
    const LoadFunctional f = LoadFunctional::density(g);
    const DiscreteField qf = apply_Qh(m, f);
    e.push_back(hminus1_surrogate(m, f + (-1.0) * LoadFunctional::piecewise_constant(qf), 2));
  }
  CHECK(std::log2(e[0] / e[1]) > 0.9);
  CHECK(std::log2(e[1] / e[2]) > 0.9);
}

TEST_CASE("point masses on edges and vertices use the limiting values") {
  const Triangulation m = make_structured_mesh(4, unit, MeshPattern::Diagonal);
  Index e = 0;
  while (m.edge_elements(e)[1] < 0) ++e;
  const Point mid = m.edge_midpoint(e);
  const LoadFunctional d = LoadFunctional::dirac(mid);
  for (Index t = 0; t < m.num_elements(); ++t) CHECK(std::abs(pair_bubble(m, d, t)) < 1e-14);
  const BiorthogonalBasis basis(m);
  for (Index z : basis.vertices) {
    const double expected = (z == m.edge(e)[0] || z == m.edge(e)[1]) ? 0.5 : 0.0;
    CHECK(pair_hat(m, d, z) == doctest::Approx(expected).epsilon(1e-12));
  }
}
