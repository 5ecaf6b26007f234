#include <doctest.h>

#include "oracles.hpp"
#include "schurshift/constraints.hpp"
#include "schurshift/designer.hpp"
#include "schurshift/rng.hpp"
#include "schurshift/subspace.hpp"

using namespace schurshift;

namespace {
DirectedGraph complete_digraph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int t = 0; t < n; ++t)
        for (int h = 0; h < n; ++h)
            if (t != h) edges.emplace_back(t, h);
    return DirectedGraph(n, std::move(edges));
}

Eigen::MatrixXd random_matrix(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m(i, j) = rng.normal();
    return m;
}
}  // namespace

TEST_CASE("vec convention: vec(ABC) = (C^T kron A) vec(B)") {
    const int n = 3;
    Eigen::MatrixXd a = random_matrix(n, 1), b = random_matrix(n, 2), c = random_matrix(n, 3);
    Eigen::MatrixXd abc = a * b * c;
    Eigen::MatrixXd kron(n * n, n * n);
    for (int jb = 0; jb < n; ++jb)
        for (int ib = 0; ib < n; ++ib)
            for (int ja = 0; ja < n; ++ja)
                for (int ia = 0; ia < n; ++ia)
                    kron(jb * n + ja, ib * n + ia) = c(ib, jb) * a(ja, ia);
    Eigen::Map<const Eigen::VectorXd> vec_b(b.data(), n * n);
    Eigen::Map<const Eigen::VectorXd> vec_abc(abc.data(), n * n);
    CHECK((kron * vec_b - vec_abc).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("topology selector covers non-edges and the diagonal") {
    // Complete digraph: only the N diagonal entries are inadmissible.
    SelectorMatrix t4 = build_topology_selector(complete_digraph(4));
    CHECK(t4.rows() == 4);
    for (int k = 0; k < 4; ++k) CHECK(t4.positions[k] == k * 4 + k);

    // n=2 with the single edge (0,1): S(1,0) is admissible, S(0,1) is not.
    SelectorMatrix t2 = build_topology_selector(DirectedGraph(2, {{0, 1}}));
    CHECK(t2.rows() == 3);  // (0,0), (1,1) and (0,1)
    Eigen::MatrixXd s(2, 2);
    s << 0.0, 5.0, 7.0, 0.0;  // only admissible entry set: S(1,0)=7
    Eigen::Map<const Eigen::VectorXd> vec_s(s.data(), 4);
    Eigen::VectorXd picked = t2.apply(vec_s);
    CHECK(picked.cwiseAbs().maxCoeff() == 5.0);  // the forbidden S(0,1)

    // row count is N^2 - |E| for random graphs
    for (std::uint64_t seed : {4ull, 9ull}) {
        DirectedGraph g = generate_erdos_renyi(8, 0.45, seed);
        CHECK(build_topology_selector(g).rows() == 64 - g.edge_count());
    }
}

TEST_CASE("selector picks exactly the inadmissible entries") {
    DirectedGraph g = generate_erdos_renyi(5, 0.5, 21);
    SelectorMatrix t = build_topology_selector(g);
    Eigen::MatrixXd s = random_matrix(5, 100);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            if (!g.entry_allowed(i, j)) s(i, j) = 0.0;
    Eigen::Map<const Eigen::VectorXd> vec_s(s.data(), 25);
    CHECK(t.apply(vec_s).cwiseAbs().maxCoeff() == 0.0);
    // violate a single non-edge: exactly one nonzero residual
    Eigen::MatrixXd s2 = s;
    s2(t.positions[2] % 5, t.positions[2] / 5) = 3.5;
    Eigen::Map<const Eigen::VectorXd> vec_s2(s2.data(), 25);
    Eigen::VectorXd res = t.apply(vec_s2);
    CHECK((res.array() != 0.0).count() == 1);
    CHECK(res.cwiseAbs().maxCoeff() == 3.5);
}

TEST_CASE("selector round trip: scatter after apply") {
    DirectedGraph g = generate_erdos_renyi(5, 0.6, 2);
    SelectorMatrix t = build_topology_selector(g);
    Eigen::VectorXd x = Eigen::VectorXd::Random(25);
    Eigen::VectorXd back = t.scatter(t.apply(x));
    for (int p = 0; p < 25; ++p) {
        const bool selected =
            std::find(t.positions.begin(), t.positions.end(), p) != t.positions.end();
        CHECK(back[p] == (selected ? x[p] : 0.0));
    }
}

TEST_CASE("build_m multiplication identity") {
    SUBCASE("empty selector yields an empty m") {
        SelectorMatrix empty;
        empty.cols = 16;
        CHECK(build_m(empty, Eigen::MatrixXd::Identity(4, 4)).rows() == 0);
    }
    SUBCASE("W = I reduces m to the dense selector") {
        DirectedGraph g = generate_erdos_renyi(4, 0.5, 6);
        SelectorMatrix t = build_topology_selector(g);
        Eigen::MatrixXd m = build_m(t, Eigen::MatrixXd::Identity(4, 4));
        CHECK((m - t.dense()).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("m vec(Z) equals the selected entries of W Z W^T") {
        const int n = 4;
        DirectedGraph g = generate_erdos_renyi(n, 0.5, 6);
        SelectorMatrix t = build_topology_selector(g);
        SubspaceBasis basis = random_subspace(n, 2, 19);
        Eigen::MatrixXd w = choose_w(basis);
        Eigen::MatrixXd m = build_m(t, w);
        for (int k = 0; k < 100; ++k) {
            Eigen::MatrixXd z =
                random_matrix(n, 1000 + k).triangularView<Eigen::Upper>();
            Eigen::MatrixXd szw = w * z * w.transpose();
            Eigen::Map<const Eigen::VectorXd> vec_z(z.data(), n * n);
            Eigen::Map<const Eigen::VectorXd> vec_szw(szw.data(), n * n);
            Eigen::VectorXd lhs = m * vec_z;
            Eigen::VectorXd rhs = t.apply(vec_szw);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <=
                  1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
        }
    }
}

TEST_CASE("structure selectors") {
    SUBCASE("n=2 r=1 shapes and positions") {
        StructureSelectors s = build_structure_selectors(2, 1);
        CHECK(s.f.positions == std::vector<int>{3});           // entry (1,1)
        CHECK(s.trace_rows.positions == std::vector<int>{0});  // entry (0,0)
        CHECK(s.x_offdiag.rows() == 2);
        CHECK(s.r_lower.rows() == 3);
    }
    SUBCASE("n=3 r=1 diagonal extraction") {
        StructureSelectors s = build_structure_selectors(3, 1);
        Eigen::MatrixXd d = Eigen::Vector3d(2.0, 5.0, 7.0).asDiagonal();
        Eigen::Map<const Eigen::VectorXd> vec_d(d.data(), 9);
        Eigen::VectorXd fd = s.f.apply(vec_d);
        CHECK(fd.size() == 2);
        CHECK(fd[0] == 5.0);
        CHECK(fd[1] == 7.0);
        double tr = 0.0;
        for (int p : s.trace_rows.positions) tr += vec_d[p];
        CHECK(tr == 2.0);
    }
    SUBCASE("n=5 r=2 off-diagonal order is the column-major scan") {
        StructureSelectors s = build_structure_selectors(5, 2);
        CHECK(s.x_offdiag.rows() == 20);
        CHECK(s.r_lower.rows() == 15);
        int k = 0;
        for (int j = 0; j < 5; ++j)
            for (int i = 0; i < 5; ++i)
                if (i != j) CHECK(s.x_offdiag.positions[k++] == j * 5 + i);
    }
}

TEST_CASE("assembled constraint set") {
    DirectedGraph g = generate_erdos_renyi(5, 0.5, 3);
    SubspaceBasis basis = random_subspace(5, 2, 3);
    ConstraintSet cs = assemble_constraints(g, choose_w(basis), 2, 1.5);
    CHECK(cs.b.size() == 1 + 20);
    CHECK(cs.b[0] == 2 * 1.5);
    CHECK(cs.b.tail(20).cwiseAbs().maxCoeff() == 0.0);
    CHECK(cs.m.rows() == cs.t_topo.rows());
    // zero is feasible for everything except the trace row
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(25);
    CHECK((cs.apply_c(zero) - cs.b).cwiseAbs().maxCoeff() == cs.b[0]);
    CHECK(cs.r_lower.apply(zero).cwiseAbs().maxCoeff() == 0.0);
}
