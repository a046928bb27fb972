#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "seqalloc/errors.hpp"
#include "seqalloc/response_model.hpp"

using namespace seqalloc;

TEST_CASE("models reject invalid parameters") {
    CHECK_THROWS_AS(ResponseModel::normal(0.0, 0.0), ConfigError);
    CHECK_THROWS_AS(ResponseModel::normal(0.0, -1.0), ConfigError);
    CHECK_THROWS_AS(ResponseModel::normal(NAN, 1.0), ConfigError);
    CHECK_THROWS_AS(ResponseModel::bernoulli(-0.01), ConfigError);
    CHECK_THROWS_AS(ResponseModel::bernoulli(1.01), ConfigError);
    CHECK_NOTHROW(ResponseModel::bernoulli(0.0));
    CHECK_NOTHROW(ResponseModel::bernoulli(1.0));
}

TEST_CASE("true mean and sd") {
    CHECK(ResponseModel::normal(5.0, 2.0).true_mean() == 5.0);
    CHECK(ResponseModel::normal(5.0, 2.0).sd() == 2.0);
    CHECK(ResponseModel::bernoulli(0.25).true_mean() == 0.25);
    CHECK(ResponseModel::bernoulli(0.25).sd() == doctest::Approx(std::sqrt(0.25 * 0.75)));
}

TEST_CASE("degenerate bernoulli draws") {
    Rng rng(1);
    const auto one = ResponseModel::bernoulli(1.0);
    const auto zero = ResponseModel::bernoulli(0.0);
    for (int i = 0; i < 1000; ++i) {
        CHECK(one.draw(rng) == 1.0);
        CHECK(zero.draw(rng) == 0.0);
    }
}

TEST_CASE("draws are reproducible and consume a fixed amount of the stream") {
    const auto n = ResponseModel::normal(0.0, 1.0);
    Rng a(42), b(42);
    CHECK(n.draw(a) == n.draw(b));

    // Normal uses two engine outputs, Bernoulli one.
    Rng c(7), d(7);
    (void)n.draw(c);
    d.discard(2);
    CHECK(c() == d());
    Rng e(7), f(7);
    (void)ResponseModel::bernoulli(0.3).draw(e);
    f.discard(1);
    CHECK(e() == f());
}

TEST_CASE("update") {
    ArmState s;
    CHECK_FALSE(s.mean().has_value());
    s = update(s, 3.0);
    CHECK(s.count == 1);
    CHECK(*s.mean() == 3.0);
    s = update(s, 1.0);
    CHECK(s.count == 2);
    CHECK(*s.mean() == 2.0);
}

TEST_CASE("fold of draws matches the arithmetic mean of the stored list") {
    Rng rng(99);
    const auto model = ResponseModel::normal(1.5, 3.0);
    for (const int n : {1, 10, 1000, 100000}) {
        std::vector<double> xs;
        ArmState s;
        for (int i = 0; i < n; ++i) {
            xs.push_back(model.draw(rng));
            s = update(s, xs.back());
        }
        long double acc = 0.0L;
        for (const double x : xs) acc += x;
        const double oracle = static_cast<double>(acc / n);
        CHECK(std::abs(*s.mean() - oracle) <= 1e-12 * n);
        CHECK(s.count == static_cast<std::uint64_t>(n));
        CHECK(*s.mean() * static_cast<double>(s.count) == doctest::Approx(s.sum).epsilon(1e-15));
    }
}

TEST_CASE("empirical means of 1e6 draws lie within 5 sigma / sqrt(n)") {
    constexpr int n = 1000000;
    Rng rng(2024);
    for (const auto& model : {ResponseModel::normal(0.7, 2.0), ResponseModel::normal(-3.6, 2.25),
                              ResponseModel::bernoulli(0.36), ResponseModel::bernoulli(0.5)}) {
        ArmState s;
        for (int i = 0; i < n; ++i) s = update(s, model.draw(rng));
        CHECK(std::abs(*s.mean() - model.true_mean()) < 5.0 * model.sd() / std::sqrt(double(n)));
    }
}

TEST_CASE("standard normal variance") {
    constexpr int n = 200000;
    Rng rng(5);
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = standard_normal(rng);
        sum += z;
        sq += z * z;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("uniform_index stays in range") {
    Rng rng(3);
    std::vector<int> hits(3, 0);
    for (int i = 0; i < 30000; ++i) ++hits[uniform_index(rng, 3)];
    for (const int h : hits) CHECK(std::abs(h - 10000) < 500);
}

TEST_CASE("derive_seed is a fixed function of (master, index)") {
    CHECK(derive_seed(0, 0) == 0xE220A8397B1DCDAFULL);
    CHECK(derive_seed(1, 0) != derive_seed(0, 1));
    CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}
