#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "atrm/activations.hpp"
#include "atrm/model.hpp"
#include "test_support.hpp"

using namespace atrm;

TEST_CASE("config validation") {
    CHECK_THROWS_AS(NetworkConfig{2, 3, 8, 1, 1}.validate(), ValueError);   // too shallow
    CHECK_THROWS_AS(NetworkConfig{5, 4, 8, 1, 1}.validate(), ValueError);   // even kernel
    CHECK_THROWS_AS(NetworkConfig{5, 3, 8, 1, 3}.validate(), ValueError);   // in != out
    CHECK_NOTHROW(NetworkConfig{3, 3, 2, 1, 1}.validate());
}

TEST_CASE("receptive field formula") {
    CHECK(receptive_field({17, 5, 64, 1, 1}) == 69);
    CHECK(receptive_field({17, 3, 64, 1, 1}) == 35);
    CHECK(receptive_field({3, 3, 2, 1, 1}) == 7);
}

TEST_CASE("init is deterministic per seed") {
    const NetworkConfig cfg{5, 3, 8, 1, 1};
    auto a = Model<float>::init(cfg, 42);
    auto b = Model<float>::init(cfg, 42);
    auto c = Model<float>::init(cfg, 43);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("first-layer weights have the configured shape and He-style spread") {
    auto model = Model<float>::init({17, 5, 64, 1, 1}, 7);
    const auto& w = model.first().weights;
    CHECK(w.shape() == std::vector<std::size_t>{64, 1, 5, 5});

    double mean = 0.0;
    for (float v : w.values()) mean += v;
    mean /= static_cast<double>(w.size());
    double var = 0.0;
    for (float v : w.values()) var += (v - mean) * (v - mean);
    var /= static_cast<double>(w.size());
    const double want_std = std::sqrt(2.0 / 25.0);
    CHECK(std::sqrt(var) == doctest::Approx(want_std).epsilon(0.10));
}

TEST_CASE("zeroed last layer yields a zero deformation map and exact restore") {
    auto model = Model<float>::init({4, 3, 6, 1, 1}, 3);
    model.last().weights.fill(0.f);
    model.last().bias.fill(0.f);

    auto gen = testsup::rng(51);
    auto y = testsup::random_tensor<float>({1, 9, 9}, gen, 0.0, 1.0);
    auto residual = model.forward_residual(y);
    CHECK(testsup::max_abs_diff(residual, Tensor<float>(y.shape())) == 0.0);
    auto restored = model.restore(y);
    CHECK(testsup::max_abs_diff(restored, y) == 0.0);
}

TEST_CASE("restore(y) + residual(y) == y elementwise") {
    auto model = Model<float>::init({3, 3, 4, 1, 1}, 9);
    auto gen = testsup::rng(52);
    auto y = testsup::random_tensor<float>({1, 8, 8}, gen, 0.0, 1.0);
    auto residual = model.forward_residual(y);
    auto restored = model.restore(y);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK(restored[i] + residual[i] == y[i]);
}

TEST_CASE("output shape equals input shape down to 1x1 frames") {
    auto model = Model<float>::init({3, 5, 4, 1, 1}, 1);
    for (const auto& shape : {std::vector<std::size_t>{1, 1, 1}, {1, 3, 1}, {1, 2, 9}}) {
        auto gen = testsup::rng(53);
        auto y = testsup::random_tensor<float>(shape, gen);
        CHECK(model.forward_residual(y).shape() == shape);
    }
}

TEST_CASE("tiny model forward matches a hand-composed oracle") {
    const NetworkConfig cfg{3, 3, 2, 1, 1};
    auto model = Model<double>::init(cfg, 21);
    auto gen = testsup::rng(54);
    auto y = testsup::random_tensor<double>({1, 5, 5}, gen, 0.0, 1.0);

    // layer 1: conv + relu
    auto a1 = relu_forward(
        testsup::conv_reference(y, model.first().weights, model.first().bias));
    // layer 2: conv + bn(train) + relu
    auto& h = model.hidden()[0];
    auto c2 = testsup::conv_reference(a1, h.conv.weights, h.conv.bias);
    auto bn_state = BNState<double>::init(2);
    auto a2 = relu_forward(batchnorm_forward(c2, h.gamma, h.beta, bn_state, Mode::train));
    // layer 3: conv
    auto want = testsup::conv_reference(a2, model.last().weights, model.last().bias);

    ForwardTrace<double> trace;
    auto got = model.forward_train(y, trace);
    CHECK(testsup::max_abs_diff(got, want) < 1e-12);
}

TEST_CASE("empirical receptive field matches the formula") {
    // positive weights and a positive point input keep every path active, so
    // the footprint is exactly the theoretical receptive field
    for (int n : {3, 5}) {
        for (int d : {3, 4, 5}) {
            const NetworkConfig cfg{d, n, 3, 1, 1};
            auto model = Model<float>::init(cfg, 99);
            for (Tensor<float>* p : model.trainable_parameters()) {
                for (auto& v : p->values()) v = std::abs(v) + 0.01f;
            }
            const int rf = receptive_field(cfg);
            const int size = rf + 8;
            Tensor<float> y({1, static_cast<std::size_t>(size), static_cast<std::size_t>(size)});
            const int c = size / 2;
            y.at(0, c, c) = 1.f;

            Tensor<float> base({1, static_cast<std::size_t>(size), static_cast<std::size_t>(size)});
            auto out = model.forward_residual(y);
            auto ref = model.forward_residual(base);

            int ymin = size, ymax = -1, xmin = size, xmax = -1;
            for (int yy = 0; yy < size; ++yy) {
                for (int xx = 0; xx < size; ++xx) {
                    if (out.at(0, yy, xx) != ref.at(0, yy, xx)) {
                        ymin = std::min(ymin, yy);
                        ymax = std::max(ymax, yy);
                        xmin = std::min(xmin, xx);
                        xmax = std::max(xmax, xx);
                    }
                }
            }
            CAPTURE(d);
            CAPTURE(n);
            CHECK(ymax - ymin + 1 == rf);
            CHECK(xmax - xmin + 1 == rf);
        }
    }
}

TEST_CASE("parameter count matches the closed form") {
    const NetworkConfig paper{17, 5, 64, 1, 1};
    auto model = Model<float>::init(paper, 0);
    const std::size_t want = 64 * 1 * 25 + 64 + 15 * (64 * 64 * 25 + 64 + 4 * 64) + 64 * 25 + 1;
    CHECK(model.parameter_count() == want);
    CHECK(expected_parameter_count(paper) == want);

    const NetworkConfig small{4, 3, 5, 3, 3};
    CHECK(Model<float>::init(small, 1).parameter_count() == expected_parameter_count(small));
}

TEST_CASE("infer mode is deterministic and batch-independent") {
    auto model = Model<float>::init({4, 3, 4, 1, 1}, 5);
    auto gen = testsup::rng(55);
    auto a = testsup::random_tensor<float>({1, 7, 7}, gen, 0.0, 1.0);
    auto b = testsup::random_tensor<float>({1, 7, 7}, gen, 0.0, 1.0);

    auto ra1 = model.forward_residual(a);
    auto ra2 = model.forward_residual(a);
    CHECK(testsup::max_abs_diff(ra1, ra2) == 0.0);

    Tensor<float> batch({2, 1, 7, 7});
    std::copy(a.values().begin(), a.values().end(), batch.data());
    std::copy(b.values().begin(), b.values().end(), batch.data() + a.size());
    auto rb = model.forward_residual(batch, Mode::infer);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(rb[i] == ra1[i]);
}

TEST_CASE("channel mismatch is rejected") {
    auto model = Model<float>::init({3, 3, 4, 1, 1}, 2);
    Tensor<float> y({3, 5, 5});
    CHECK_THROWS_AS(model.forward_residual(y), ShapeError);
}
