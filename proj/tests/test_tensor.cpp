#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "atrm/tensor.hpp"

using atrm::ShapeError;
using atrm::Tensor;

TEST_CASE("shape product must match data length") {
    CHECK_NOTHROW(Tensor<float>({2, 3}, std::vector<float>(6, 0.f)));
    CHECK_THROWS_AS(Tensor<float>({2, 3}, std::vector<float>(5, 0.f)), ShapeError);
}

TEST_CASE("zero-filled construction and indexing") {
    Tensor<double> t({2, 3, 4});
    CHECK(t.size() == 24);
    CHECK(t.rank() == 3);
    t.at(1, 2, 3) = 7.0;
    CHECK(t[1 * 12 + 2 * 4 + 3] == 7.0);
    CHECK(t.extent(2) == 4);
    CHECK_THROWS_AS((void)t.extent(3), ShapeError);
}

TEST_CASE("rank-4 indexing is row-major, last index fastest") {
    Tensor<float> t({2, 2, 2, 2});
    float v = 0.f;
    for (auto& e : t.values()) e = v++;
    CHECK(t.at(0, 0, 0, 1) == 1.f);
    CHECK(t.at(0, 0, 1, 0) == 2.f);
    CHECK(t.at(0, 1, 0, 0) == 4.f);
    CHECK(t.at(1, 0, 0, 0) == 8.f);
}

TEST_CASE("finiteness check catches NaN and Inf") {
    Tensor<float> t({3}, std::vector<float>{1.f, 2.f, 3.f});
    CHECK(t.all_finite());
    t[1] = std::numeric_limits<float>::quiet_NaN();
    CHECK_FALSE(t.all_finite());
    t[1] = std::numeric_limits<float>::infinity();
    CHECK_FALSE(t.all_finite());
}

TEST_CASE("cast converts elementwise") {
    Tensor<float> t({2}, std::vector<float>{0.5f, -2.f});
    auto d = t.cast<double>();
    CHECK(d[0] == doctest::Approx(0.5));
    CHECK(d[1] == doctest::Approx(-2.0));
}
