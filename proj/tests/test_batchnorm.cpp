#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atrm/activations.hpp"
#include "atrm/batchnorm.hpp"
#include "test_support.hpp"

using namespace atrm;

TEST_CASE("relu clamps negatives and keeps non-negatives") {
    Tensor<float> x({3}, std::vector<float>{-1.f, 0.f, 2.f});
    auto y = relu_forward(x);
    CHECK(y[0] == 0.f);
    CHECK(y[1] == 0.f);
    CHECK(y[2] == 2.f);

    auto gen = testsup::rng(31);
    auto pos = testsup::random_tensor<float>({2, 3, 3}, gen, 0.0, 1.0);
    CHECK(testsup::max_abs_diff(relu_forward(pos), pos) == 0.0);
}

TEST_CASE("relu backward matches finite differences away from the kink") {
    auto gen = testsup::rng(32);
    Tensor<double> x({4, 4});
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& v : x.values()) {
        do { v = dist(gen); } while (std::abs(v) < 1e-3);
    }
    auto grad_out = testsup::random_tensor<double>({4, 4}, gen);

    auto objective = [&]() {
        auto out = relu_forward(x);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += grad_out[i] * out[i];
        return s;
    };
    auto analytic = relu_backward(grad_out, x);
    auto fd = testsup::finite_difference(x, objective, 1e-6);
    CHECK(testsup::max_rel_diff(analytic, fd) < 1e-6);
}

TEST_CASE("train mode standardizes each channel") {
    auto gen = testsup::rng(33);
    auto x = testsup::random_tensor<double>({4, 3, 6, 5}, gen, -2.0, 3.0);
    Tensor<double> gamma({3}, 1.0);
    Tensor<double> beta({3}, 0.0);
    auto state = BNState<double>::init(3);
    auto out = batchnorm_forward(x, gamma, beta, state, Mode::train);

    const std::size_t per_channel = 4 * 6 * 5;
    for (std::size_t c = 0; c < 3; ++c) {
        double mean = 0.0, var = 0.0;
        for (std::size_t n = 0; n < 4; ++n)
            for (std::size_t y = 0; y < 6; ++y)
                for (std::size_t xx = 0; xx < 5; ++xx) mean += out.at(n, c, y, xx);
        mean /= per_channel;
        for (std::size_t n = 0; n < 4; ++n)
            for (std::size_t y = 0; y < 6; ++y)
                for (std::size_t xx = 0; xx < 5; ++xx) {
                    const double d = out.at(n, c, y, xx) - mean;
                    var += d * d;
                }
        var /= per_channel;
        CHECK(std::abs(mean) <= 1e-6);
        CHECK(std::abs(var - 1.0) < 1e-4);  // up to the epsilon correction
    }
}

TEST_CASE("constant channel with gamma=1 beta=5 gives 5 everywhere") {
    Tensor<float> x({1, 4, 4}, 0.37f);
    Tensor<float> gamma({1}, 1.f);
    Tensor<float> beta({1}, 5.f);
    auto state = BNState<float>::init(1);
    auto out = batchnorm_forward(x, gamma, beta, state, Mode::train);
    for (float v : out.values()) CHECK(v == doctest::Approx(5.f).epsilon(1e-5));
}

TEST_CASE("running statistics blend with momentum 0.9") {
    Tensor<double> x({1, 2, 2}, 3.0);  // constant channel: batch mean 3, var 0
    Tensor<double> gamma({1}, 1.0);
    Tensor<double> beta({1}, 0.0);
    auto state = BNState<double>::init(1);
    batchnorm_forward(x, gamma, beta, state, Mode::train);
    CHECK(state.running_mean[0] == doctest::Approx(0.9 * 0.0 + 0.1 * 3.0));
    CHECK(state.running_var[0] == doctest::Approx(0.9 * 1.0 + 0.1 * 0.0));
}

TEST_CASE("infer mode uses running stats and ignores batch composition") {
    auto gen = testsup::rng(34);
    Tensor<float> gamma({2}, 1.5f);
    Tensor<float> beta({2}, -0.5f);
    auto state = BNState<float>::init(2);
    state.running_mean[0] = 0.3f;
    state.running_var[1] = 2.0f;

    auto a = testsup::random_tensor<float>({2, 3, 3}, gen);
    auto alone = batchnorm_forward(a, gamma, beta, state, Mode::infer);

    // same sample inside a batch with a diffrent companion
    Tensor<float> batch({2, 2, 3, 3});
    std::copy(a.values().begin(), a.values().end(), batch.data());
    auto other = testsup::random_tensor<float>({2, 3, 3}, gen);
    std::copy(other.values().begin(), other.values().end(), batch.data() + a.size());
    auto batched = batchnorm_forward(batch, gamma, beta, state, Mode::infer);

    for (std::size_t i = 0; i < a.size(); ++i) CHECK(batched[i] == alone[i]);
}

TEST_CASE("train mode rejects a single-value channel") {
    Tensor<float> x({1, 2, 1, 1});  // two channels but only one value each
    Tensor<float> gamma({2}, 1.f);
    Tensor<float> beta({2}, 0.f);
    auto state = BNState<float>::init(2);
    CHECK_THROWS_AS(batchnorm_forward(x, gamma, beta, state, Mode::train), ValueError);
    CHECK_NOTHROW(batchnorm_forward(x, gamma, beta, state, Mode::infer));
}

TEST_CASE("backward: zero grad gives zero grads, grad_beta sums grad_out") {
    auto gen = testsup::rng(35);
    auto x = testsup::random_tensor<double>({2, 2, 3, 3}, gen);
    Tensor<double> gamma({2}, 1.3);
    Tensor<double> beta({2}, 0.2);
    auto state = BNState<double>::init(2);
    BNCache<double> cache;
    batchnorm_forward(x, gamma, beta, state, Mode::train, &cache);

    Tensor<double> zeros({2, 2, 3, 3});
    auto zg = batchnorm_backward(zeros, gamma, cache);
    CHECK(testsup::max_abs_diff(zg.x, zeros) == 0.0);
    CHECK(zg.gamma[0] == 0.0);
    CHECK(zg.beta[1] == 0.0);

    auto grad_out = testsup::random_tensor<double>({2, 2, 3, 3}, gen);
    auto g = batchnorm_backward(grad_out, gamma, cache);
    for (std::size_t c = 0; c < 2; ++c) {
        double want = 0.0;
        for (std::size_t n = 0; n < 2; ++n)
            for (std::size_t y = 0; y < 3; ++y)
                for (std::size_t xx = 0; xx < 3; ++xx) want += grad_out.at(n, c, y, xx);
        CHECK(g.beta[c] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("backward matches finite differences for x, gamma and beta") {
    auto gen = testsup::rng(36);
    auto x = testsup::random_tensor<double>({2, 2, 4, 3}, gen, -1.5, 1.5);
    Tensor<double> gamma({2}, std::vector<double>{1.2, 0.7});
    Tensor<double> beta({2}, std::vector<double>{0.1, -0.4});
    auto grad_out = testsup::random_tensor<double>({2, 2, 4, 3}, gen);

    auto objective = [&]() {
        auto state = BNState<double>::init(2);
        auto out = batchnorm_forward(x, gamma, beta, state, Mode::train);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += grad_out[i] * out[i];
        return s;
    };

    auto state = BNState<double>::init(2);
    BNCache<double> cache;
    batchnorm_forward(x, gamma, beta, state, Mode::train, &cache);
    auto grads = batchnorm_backward(grad_out, gamma, cache);

    CHECK(testsup::max_rel_diff(grads.x, testsup::finite_difference(x, objective)) < 1e-5);
    CHECK(testsup::max_rel_diff(grads.gamma, testsup::finite_difference(gamma, objective)) < 1e-5);
    CHECK(testsup::max_rel_diff(grads.beta, testsup::finite_difference(beta, objective)) < 1e-5);
}
