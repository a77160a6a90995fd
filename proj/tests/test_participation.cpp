#include <doctest.h>

#include <cmath>

#include "mfdp/errors.hpp"
#include "mfdp/participation.hpp"
#include "mfdp/rng.hpp"
#include "mfdp/treestamp.hpp"
#include "mfdp/workloads.hpp"

using namespace mfdp;

namespace {

Matrix random_matrix(int r, int c, std::uint64_t seed) {
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rng::keyed_gaussian(seed, i, j);
    return m;
}

Matrix random_nonneg(int r, int c, std::uint64_t seed) {
    return random_matrix(r, c, seed).cwiseAbs();
}

}  // namespace

TEST_CASE("make_schema produces the (k,b) patterns") {
    auto s = make_schema(6, 3, 2);
    REQUIRE(s.patterns.size() == 2);
    CHECK(s.patterns[0] == std::vector<int>{0, 2, 4});
    CHECK(s.patterns[1] == std::vector<int>{1, 3, 5});

    auto single = make_schema(4, 1, 4);
    REQUIRE(single.patterns.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(single.patterns[i] == std::vector<int>{i});

    auto every = make_schema(3, 3, 1);
    REQUIRE(every.patterns.size() == 1);
    CHECK(every.patterns[0] == std::vector<int>{0, 1, 2});

    CHECK_THROWS_AS(make_schema(5, 2, 2), InvalidSchemaError);
}

TEST_CASE("corner set shapes and sign structure") {
    auto s = make_schema(6, 3, 2);
    auto full = corner_set(s, false);
    CHECK(full.vectors.cols() == 2 * 4);  // b * 2^(k-1)
    for (int c = 0; c < full.vectors.cols(); ++c) {
        const auto& pi = s.patterns[full.pattern_of[c]];
        CHECK(full.vectors(pi[0], c) == 1.0);  // first sign fixed
        double nnz = 0;
        for (int i = 0; i < 6; ++i) nnz += full.vectors(i, c) != 0.0;
        CHECK(nnz == 3);
    }
    auto nn = corner_set(s, true);
    CHECK(nn.vectors.cols() == 2);
    CHECK(nn.vectors.minCoeff() == 0.0);
    CHECK(nn.vectors.maxCoeff() == 1.0);
}

TEST_CASE("sens_brute examples") {
    CHECK(sens_brute(Matrix::Identity(4, 4), make_schema(4, 2, 2)) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // prefix n=2 under every-step: corners (1,1) and (1,-1)
    CHECK(sens_brute(prefix_workload(2), make_schema(2, 2, 1)) ==
          doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));

    // single participation reduces to the max column norm
    const Matrix c = random_matrix(5, 5, 9);
    double max_col = 0.0;
    for (int j = 0; j < 5; ++j) max_col = std::max(max_col, c.col(j).norm());
    CHECK(sens_brute(c, single_participation(5)) == doctest::Approx(max_col).epsilon(1e-12));
}

TEST_CASE("sens_brute is sign-symmetric and certificate points at the argmax") {
    const Matrix c = random_matrix(6, 6, 10);
    auto schema = make_schema(6, 2, 3);
    auto cert = sens_brute_cert(c, schema);
    CHECK(cert.pattern_index >= 0);
    CHECK(cert.pattern_index < 3);
    // flipping all signs of a corner cannot change the value: revalidate via
    // explicit enumeration over full +-1 supports
    double best = 0.0;
    for (const auto& pi : schema.patterns)
        for (int mask = 0; mask < 4; ++mask) {
            Vector u = Vector::Zero(6);
            u(pi[0]) = (mask & 1) ? -1.0 : 1.0;
            u(pi[1]) = (mask & 2) ? -1.0 : 1.0;
            best = std::max(best, (c * u).norm());
        }
    CHECK(cert.value == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("zero-padded corners are dominated by full-support corners") {
    // convexity: enumerating only full-support sign vectors is exact
    const Matrix c = random_matrix(6, 6, 11);
    auto schema = make_schema(6, 3, 2);
    const double sens = sens_brute(c, schema);
    for (int t = 0; t < 200; ++t) {
        const auto& pi = schema.patterns[t % 2];
        Vector u = Vector::Zero(6);
        for (int j = 0; j < 3; ++j) {
            const double r = rng::keyed_uniform(77, t, j);
            u(pi[j]) = r < 1.0 / 3 ? 0.0 : (r < 2.0 / 3 ? 1.0 : -1.0);
        }
        CHECK((c * u).norm() <= sens * (1.0 + 1e-12));
    }
}

TEST_CASE("nonneg fast path equals brute force when X >= 0") {
    CHECK(sens_nonneg_fastpath(Matrix::Identity(6, 6), make_schema(6, 3, 2)) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 2 + trial % 3;
        const int b = 1 + trial % 4;
        const int n = k * b;
        const Matrix c = random_nonneg(n + 2, n, 4000 + trial);
        auto schema = make_schema(n, k, b);
        REQUIRE(check_pairwise_nonneg(c, schema));
        CHECK(sens_nonneg_fastpath(c, schema) ==
              doctest::Approx(sens_brute(c, schema)).epsilon(1e-10));
    }
}

TEST_CASE("fast path equals brute force whenever the pairwise check holds") {
    // mixed-sign C: only the co-occurring entries of X need to be nonnegative
    int covered = 0;
    for (int trial = 0; trial < 400 && covered < 60; ++trial) {
        const int k = 2 + trial % 2;
        const int b = 2 + trial % 3;
        const int n = k * b;
        Matrix c = random_matrix(n + 2, n, 12000 + trial);
        c.col(0) *= -1.0;  // flip a column so X has negative entries somewhere
        auto schema = make_schema(n, k, b);
        if (!check_pairwise_nonneg(c, schema)) continue;
        ++covered;
        CHECK(sens_nonneg_fastpath(c, schema) ==
              doctest::Approx(sens_brute(c, schema)).epsilon(1e-10));
    }
    CHECK(covered > 0);
}

TEST_CASE("nonneg fast path on binary-tree encoders across schemas") {
    for (const auto& [n, k] : std::vector<std::pair<int, int>>{
             {8, 2}, {8, 4}, {12, 3}, {16, 2}, {16, 4}, {15, 5}}) {
        auto [spec, embedding] = tree_encoder(n);
        const Matrix c = spec.encoder * embedding;
        auto schema = make_schema(n, k, n / k);
        CHECK(sens_nonneg_fastpath(c, schema) ==
              doctest::Approx(sens_brute(c, schema)).epsilon(1e-12));
    }
}

TEST_CASE("nonneg fast path rejects negative correlations") {
    Matrix c = Matrix::Identity(4, 4);
    c(0, 2) = -0.9;  // X[0,2] < 0 and (0,2) co-occurs under (k=2,b=2)
    auto schema = make_schema(4, 2, 2);
    CHECK_FALSE(check_pairwise_nonneg(c, schema));
    CHECK_THROWS_AS(sens_nonneg_fastpath(c, schema), NonnegativityViolated);
    CHECK(check_pairwise_nonneg(Matrix::Identity(4, 4), schema));
}

TEST_CASE("sens_upper dominates sens_brute") {
    auto schema = make_schema(6, 3, 2);
    CHECK(sens_upper(Matrix::Identity(6, 6), schema) ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    // k=1: bound equals the max column norm
    const Matrix c1 = random_matrix(5, 5, 31);
    CHECK(sens_upper(c1, single_participation(5)) ==
          doctest::Approx(sens_brute(c1, single_participation(5))).epsilon(1e-10));
    auto s84 = make_schema(8, 2, 4);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix c = random_matrix(8, 8, 6000 + trial);
        CHECK(sens_upper(c, s84) >= sens_brute(c, s84) * (1.0 - 1e-12));
    }
}

TEST_CASE("brute force guard for large k") {
    auto schema = make_schema(42, 21, 2);
    const Matrix c = Matrix::Identity(42, 42);
    CHECK_THROWS_AS(sens_brute(c, schema), TooLargeError);
    CHECK(sens_upper(c, schema) == doctest::Approx(std::sqrt(21.0)));
}

TEST_CASE("vector sensitivity counterexample from the three-step schema") {
    Matrix c(3, 3);
    c << 2, 1, 1, 1, 2, -1, 1, -1, 2;
    c /= std::sqrt(24.0);
    Matrix g(3, 2);
    g << 2, 1, 2, -1, 1, 2;
    g /= std::sqrt(5.0);

    CHECK(sens_brute(c, every_step_participation(3)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(vector_sens_check(c, g) == doctest::Approx(std::sqrt(1.1)).epsilon(1e-9));
}

TEST_CASE("vector_sens_check validates row norms and handles sparse G") {
    const Matrix c = random_matrix(3, 3, 50);
    Matrix g = Matrix::Zero(3, 2);
    g(0, 0) = 1.0;  // single nonzero row: reduces to one column's norm
    CHECK(vector_sens_check(c, g) == doctest::Approx(c.col(0).norm()).epsilon(1e-12));
    g(0, 0) = 1.5;
    CHECK_THROWS_AS(vector_sens_check(c, g), ContractViolation);
}

namespace {

Matrix unit_rows(Matrix g) {
    for (int i = 0; i < g.rows(); ++i) {
        const double norm = g.row(i).norm();
        if (norm > 1.0) g.row(i) /= norm * (1.0 + 1e-14);
    }
    return g;
}

}  // namespace

TEST_CASE("vector reduction holds for k <= 2") {
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 1 + trial % 2;
        const int n = 4;
        auto schema = make_schema(n, k, n / k);
        Matrix c = random_matrix(n, n, 7000 + trial);
        c /= sens_brute(c, schema);
        // worst pattern columns with bounded-row G
        const Matrix g = unit_rows(random_matrix(k, 3, 7500 + trial));
        for (const auto& pi : schema.patterns) {
            Matrix cols(n, k);
            for (int j = 0; j < k; ++j) cols.col(j) = c.col(pi[j]);
            CHECK(vector_sens_check(cols, g) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("vector reduction holds for colinear and orthogonal rows") {
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 3;
        auto schema = make_schema(3, 3, 1);
        Matrix c = random_matrix(3, 3, 8000 + trial);
        c /= sens_brute(c, schema);

        // colinear unit rows
        Vector base = random_matrix(1, 4, 8200 + trial).row(0);
        base.normalize();
        Matrix gc(k, 4);
        for (int i = 0; i < k; ++i)
            gc.row(i) = (rng::keyed_uniform(8300, trial, i) < 0.5 ? -1.0 : 1.0) * base;
        CHECK(vector_sens_check(c, gc) <= 1.0 + 1e-9);

        // orthogonal rows (scaled rows of an orthogonal basis)
        Matrix go = Matrix::Zero(k, 4);
        for (int i = 0; i < k; ++i)
            go(i, i) = rng::keyed_uniform(8400, trial, i);
        CHECK(vector_sens_check(c, go) <= 1.0 + 1e-9);
    }
}

TEST_CASE("pi/2 bound holds on random instances") {
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 3 + trial % 2;
        auto schema = make_schema(k, k, 1);
        Matrix c = random_matrix(k, k, 9000 + trial);
        c /= sens_brute(c, schema);
        const Matrix g = unit_rows(random_matrix(k, 2 + trial % 3, 9500 + trial));
        CHECK(vector_sens_check(c, g) <= M_PI / 2.0 + 1e-9);
    }
}

TEST_CASE("operator norm view: single participation is the column-max norm") {
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix c = random_matrix(6, 6, 10000 + trial);
        double max_col = 0.0;
        for (int j = 0; j < 6; ++j) max_col = std::max(max_col, c.col(j).norm());
        CHECK(sens_brute(c, single_participation(6)) == doctest::Approx(max_col));
    }
}
