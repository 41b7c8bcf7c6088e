#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atrm/conv.hpp"
#include "test_support.hpp"

using namespace atrm;

TEST_CASE("1x1 identity kernel reproduces the input") {
    auto gen = testsup::rng(11);
    auto input = testsup::random_tensor<float>({1, 6, 7}, gen);
    Tensor<float> w({1, 1, 1, 1}, std::vector<float>{1.f});
    Tensor<float> b({1});
    auto out = conv2d_forward(input, w, b, {1, 1, 1});
    CHECK(testsup::max_abs_diff(out, input) == 0.0);
}

TEST_CASE("3x3 delta kernel is exactly identity, borders included") {
    auto gen = testsup::rng(12);
    auto input = testsup::random_tensor<double>({2, 5, 4}, gen);
    Tensor<double> w({2, 2, 3, 3});
    // each output channel reads only the center pixel of the same channel
    w.at(0, 0, 1, 1) = 1.0;
    w.at(1, 1, 1, 1) = 1.0;
    Tensor<double> b({2});
    auto out = conv2d_forward(input, w, b, {2, 2, 3});
    CHECK(testsup::max_abs_diff(out, input) == 0.0);
}

TEST_CASE("matches the quadruple-loop reference on random cases") {
    auto gen = testsup::rng(13);
    struct Case {
        std::vector<std::size_t> in_shape;
        int ci, co, n;
    };
    const Case cases[] = {
        {{1, 4, 4}, 1, 2, 3},     // the spec's example case
        {{3, 9, 7}, 3, 4, 5},
        {{2, 3, 1, 6}, 3, 2, 3},  // batched
        {{1, 2, 2}, 1, 1, 5},     // kernel larger than the image
        {{2, 5, 8, 8}, 5, 3, 1},  // pointwise
    };
    for (const Case& c : cases) {
        CAPTURE(c.n);
        auto input = testsup::random_tensor<double>(c.in_shape, gen);
        auto w = testsup::random_tensor<double>(
            {static_cast<std::size_t>(c.co), static_cast<std::size_t>(c.ci),
             static_cast<std::size_t>(c.n), static_cast<std::size_t>(c.n)},
            gen);
        auto b = testsup::random_tensor<double>({static_cast<std::size_t>(c.co)}, gen);
        auto got = conv2d_forward(input, w, b, {c.ci, c.co, c.n});
        auto want = testsup::conv_reference(input, w, b);
        CHECK(testsup::max_abs_diff(got, want) < 1e-12);
    }
}

TEST_CASE("convolution is linear in its input") {
    auto gen = testsup::rng(14);
    const ConvSpec spec{2, 3, 3};
    auto xa = testsup::random_tensor<double>({2, 6, 6}, gen);
    auto xb = testsup::random_tensor<double>({2, 6, 6}, gen);
    auto w = testsup::random_tensor<double>({3, 2, 3, 3}, gen);
    Tensor<double> zero_bias({3});

    const double a = 0.7, bcoef = -1.3;
    Tensor<double> mix({2, 6, 6});
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * xa[i] + bcoef * xb[i];

    auto lhs = conv2d_forward(mix, w, zero_bias, spec);
    auto ca = conv2d_forward(xa, w, zero_bias, spec);
    auto cb = conv2d_forward(xb, w, zero_bias, spec);
    Tensor<double> rhs({3, 6, 6});
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = a * ca[i] + bcoef * cb[i];
    CHECK(testsup::max_abs_diff(lhs, rhs) < 1e-12);
}

TEST_CASE("all-ones kernel computes interior window sums") {
    auto gen = testsup::rng(15);
    auto input = testsup::random_tensor<double>({1, 7, 7}, gen);
    Tensor<double> w({1, 1, 3, 3}, std::vector<double>(9, 1.0));
    Tensor<double> b({1});
    auto out = conv2d_forward(input, w, b, {1, 1, 3});
    // interior pixel (3,4): sum of the 3x3 window around it
    double want = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) want += input.at(0, 3 + dy, 4 + dx);
    CHECK(out.at(0, 3, 4) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("shape errors name the offending dimension") {
    Tensor<float> input({2, 4, 4});
    Tensor<float> w({1, 1, 3, 3});
    Tensor<float> b({1});
    CHECK_THROWS_WITH_AS(conv2d_forward(input, w, b, {1, 1, 3}),
                         doctest::Contains("channel"), ShapeError);
    Tensor<float> input2({1, 4, 4});
    Tensor<float> bad_bias({2});
    CHECK_THROWS_AS(conv2d_forward(input2, w, bad_bias, {1, 1, 3}), ShapeError);
    CHECK_THROWS_AS(conv2d_forward(input2, w, b, ConvSpec{1, 1, 4}), ValueError);
}

TEST_CASE("backward: zero grad_out gives zero gradients") {
    auto gen = testsup::rng(16);
    auto input = testsup::random_tensor<float>({2, 5, 5}, gen);
    auto w = testsup::random_tensor<float>({3, 2, 3, 3}, gen);
    Tensor<float> grad_out({3, 5, 5});
    auto grads = conv2d_backward(grad_out, input, w, {2, 3, 3});
    CHECK(testsup::max_abs_diff(grads.input, Tensor<float>(input.shape())) == 0.0);
    CHECK(testsup::max_abs_diff(grads.weights, Tensor<float>(w.shape())) == 0.0);
    CHECK(testsup::max_abs_diff(grads.bias, Tensor<float>({3})) == 0.0);
}

TEST_CASE("backward: 1x1 kernel follows the scalar chain rule") {
    auto gen = testsup::rng(17);
    auto input = testsup::random_tensor<double>({1, 4, 4}, gen);
    auto grad_out = testsup::random_tensor<double>({1, 4, 4}, gen);
    const double wval = 1.7;
    Tensor<double> w({1, 1, 1, 1}, std::vector<double>{wval});
    auto grads = conv2d_backward(grad_out, input, w, {1, 1, 1});

    double want_gw = 0.0, want_gb = 0.0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        CHECK(grads.input[i] == doctest::Approx(wval * grad_out[i]).epsilon(1e-12));
        want_gw += input[i] * grad_out[i];
        want_gb += grad_out[i];
    }
    CHECK(grads.weights[0] == doctest::Approx(want_gw).epsilon(1e-12));
    CHECK(grads.bias[0] == doctest::Approx(want_gb).epsilon(1e-12));
}

TEST_CASE("backward matches central finite differences") {
    auto gen = testsup::rng(18);
    auto input = testsup::random_tensor<double>({2, 2, 5, 4}, gen);
    auto w = testsup::random_tensor<double>({3, 2, 3, 3}, gen);
    auto b = testsup::random_tensor<double>({3}, gen);
    auto grad_out = testsup::random_tensor<double>({2, 3, 5, 4}, gen);
    const ConvSpec spec{2, 3, 3};

    // scalar objective: sum(grad_out * conv(input))
    auto objective = [&]() {
        auto out = conv2d_forward(input, w, b, spec);
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += grad_out[i] * out[i];
        return s;
    };

    auto grads = conv2d_backward(grad_out, input, w, spec);
    auto fd_input = testsup::finite_difference(input, objective);
    auto fd_w = testsup::finite_difference(w, objective);
    auto fd_b = testsup::finite_difference(b, objective);

    CHECK(testsup::max_rel_diff(grads.input, fd_input) < 1e-6);
    CHECK(testsup::max_rel_diff(grads.weights, fd_w) < 1e-6);
    CHECK(testsup::max_rel_diff(grads.bias, fd_b) < 1e-6);
}
