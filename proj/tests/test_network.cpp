#include <cmath>
#include <cstddef>

#include <doctest.h>

#include "quanv/network.hpp"
#include "support/gradcheck.hpp"

using namespace quanv;

namespace {

DArray random_unit_array(Rng& rng, Shape shape) {
    DArray a(std::move(shape));
    for (double& x : a.v) x = rng.next_unit();
    return a;
}

DArray random_target(Rng& rng, Shape shape) {
    // strictly inside (0, 1) so BCE and its gradient stay smooth
    DArray t(std::move(shape));
    for (double& x : t.v) x = 0.1 + 0.8 * rng.next_unit();
    return t;
}

Network seeded_network(NetworkSpec spec, std::uint64_t seed) {
    Network net(std::move(spec));
    Rng rng(seed);
    net.init_weights(rng);
    return net;
}

} // namespace

TEST_CASE("double array round trips through the float tensor form") {
    Tensor t({2, 2}, {0.25f, -1.5f, 3.0f, 0.0f});
    const DArray a = DArray::from_tensor(t);
    CHECK(a.shape == t.shape);
    CHECK(a.to_tensor() == t);
}

TEST_CASE("conv2d arithmetic on a hand-computed window") {
    NetworkSpec spec;
    spec.input_shape = {3, 3, 1};
    spec.layers = {LayerSpec::conv2d(1, 2, 1, Padding::None)};
    Network net(std::move(spec));

    auto& st = net.states()[0];
    for (double& w : st.weights.v) w = 1.0;
    st.bias.v[0] = 0.5;

    DArray x({3, 3, 1}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const DArray y = net.forward(x);
    REQUIRE(y.shape == Shape{2, 2, 1});
    CHECK(y.v[0] == doctest::Approx(12.5));
    CHECK(y.v[1] == doctest::Approx(16.5));
    CHECK(y.v[2] == doctest::Approx(24.5));
    CHECK(y.v[3] == doctest::Approx(28.5));
}

TEST_CASE("same padding puts the extra cell on the trailing edge") {
    // in=4, k=3, s=2: out=2, one pad cell total, all of it after the data
    NetworkSpec spec;
    spec.input_shape = {1, 4, 1};
    spec.layers = {LayerSpec::conv2d(1, 3, 2, Padding::Same)};
    Network net(std::move(spec));
    for (double& w : net.states()[0].weights.v) w = 1.0;

    DArray x({1, 4, 1}, {1, 1, 1, 1});
    const DArray y = net.forward(x);
    REQUIRE(y.shape == Shape{1, 2, 1});
    CHECK(y.v[0] == doctest::Approx(3.0)); // window fully inside
    CHECK(y.v[1] == doctest::Approx(2.0)); // one padded cell
}

TEST_CASE("max pool keeps the maximum and records the first winner") {
    NetworkSpec spec;
    spec.input_shape = {2, 2, 1};
    spec.layers = {LayerSpec::max_pool(2, 2)};
    Network net(std::move(spec));

    Network::Trace trace;
    DArray x({2, 2, 1}, {1, 7, 7, 2});
    const DArray y = net.forward(x, RunMode::eval, &trace, nullptr);
    REQUIRE(y.shape == Shape{1, 1, 1});
    CHECK(y.v[0] == 7.0);
    REQUIRE(trace.argmax.size() == 1);
    CHECK(trace.argmax[0][0] == 1); // flat index of the first 7

    DArray flat({2, 2, 1}, {5, 5, 5, 5});
    Network::Trace tie;
    net.forward(flat, RunMode::eval, &tie, nullptr);
    CHECK(tie.argmax[0][0] == 0); // ties go to the first cell scanned
}

TEST_CASE("upsample repeats nearest neighbors") {
    NetworkSpec spec;
    spec.input_shape = {1, 2, 1};
    spec.layers = {LayerSpec::up_sample(2)};
    Network net(std::move(spec));

    DArray x({1, 2, 1}, {3, 4});
    const DArray y = net.forward(x);
    REQUIRE(y.shape == Shape{2, 4, 1});
    CHECK(y.v == std::vector<double>{3, 3, 4, 4, 3, 3, 4, 4});
}

TEST_CASE("relu blocks gradient where the activation is negative") {
    NetworkSpec spec;
    spec.input_shape = {1};
    spec.layers = {LayerSpec::dense(2), LayerSpec::relu()};
    Network net(std::move(spec));

    auto& st = net.states()[0];
    st.weights.v = {1.0, -1.0}; // unit 0 positive, unit 1 negative for x > 0
    st.bias.v = {0.0, 0.0};

    Network::Trace trace;
    DArray x({1}, {2.0});
    net.forward(x, RunMode::eval, &trace, nullptr);

    Gradients grads = net.make_zero_gradients();
    DArray up({2}, {1.0, 1.0});
    net.backward(trace, up, grads);

    CHECK(grads.bias[0].v[0] == 1.0);
    CHECK(grads.bias[0].v[1] == 0.0);
    CHECK(grads.weights[0].v[0] == 2.0);
    CHECK(grads.weights[0].v[1] == 0.0);
}

TEST_CASE("analytic gradients match finite differences on a small net") {
    NetworkSpec spec;
    spec.input_shape = {8, 8, 1};
    spec.layers = {
        LayerSpec::conv2d(4, 3),
        LayerSpec::relu(),
        LayerSpec::max_pool(2, 2),
        LayerSpec::flatten(),
        LayerSpec::dense(6),
        LayerSpec::sigmoid(),
    };
    Network net = seeded_network(std::move(spec), 11);

    Rng rng(12);
    const DArray x = random_unit_array(rng, {8, 8, 1});
    const DArray t = random_target(rng, {6});

    const auto r = gradcheck::check_parameters(net, x, t, 1e-3);
    CHECK(r.checked > 0);
    CHECK(r.max_rel_err < 1e-3);
}

TEST_CASE("finite differences also cover the decoder-style layers") {
    NetworkSpec spec;
    spec.input_shape = {16};
    spec.layers = {
        LayerSpec::dense(8),
        LayerSpec::tanh(),
        LayerSpec::dense(16),
        LayerSpec::reshape({4, 4, 1}),
        LayerSpec::conv2d(2, 2),
        LayerSpec::relu(),
        LayerSpec::up_sample(2),
        LayerSpec::conv2d(1, 3),
        LayerSpec::sigmoid(),
    };
    Network net = seeded_network(std::move(spec), 21);

    Rng rng(22);
    const DArray x = random_unit_array(rng, {16});
    const DArray t = random_target(rng, {8, 8, 1});

    const auto r = gradcheck::check_parameters(net, x, t, 1e-5);
    CHECK(r.checked > 0);
    CHECK(r.max_rel_err < 1e-3);
}

TEST_CASE("dropout scales kept values and preserves the mean") {
    NetworkSpec spec;
    spec.input_shape = {4096};
    spec.layers = {LayerSpec::dropout(0.25)};
    Network net(std::move(spec));

    DArray ones({4096});
    for (double& v : ones.v) v = 1.0;

    Rng rng(31);
    Network::Trace trace;
    const DArray y = net.forward(ones, RunMode::train, &trace, &rng);

    double sum = 0.0;
    for (double v : y.v) {
        const bool kept = std::abs(v - 1.0 / 0.75) < 1e-12;
        CHECK((kept || v == 0.0));
        sum += v;
    }
    // inverted scaling keeps the expectation at 1 (2% statistical slack)
    CHECK(sum / static_cast<double>(ones.numel()) == doctest::Approx(1.0).epsilon(0.02));

    // eval mode is the identity
    const DArray eval = net.forward(ones);
    CHECK(eval.v == ones.v);
}

TEST_CASE("train-mode dropout needs a random stream") {
    NetworkSpec spec;
    spec.input_shape = {8};
    spec.layers = {LayerSpec::dropout(0.5)};
    Network net(std::move(spec));

    DArray x({8});
    Network::Trace trace;
    CHECK_THROWS_AS(net.forward(x, RunMode::train, &trace, nullptr), state_error);
}

TEST_CASE("dropout backward reuses the forward mask") {
    NetworkSpec spec;
    spec.input_shape = {1};
    spec.layers = {LayerSpec::dense(8), LayerSpec::dropout(0.5)};
    Network net = seeded_network(std::move(spec), 41);

    Rng rng(42);
    Network::Trace trace;
    DArray x({1}, {1.0});
    const DArray y = net.forward(x, RunMode::train, &trace, &rng);

    Gradients grads = net.make_zero_gradients();
    DArray up({8});
    for (double& v : up.v) v = 1.0;
    net.backward(trace, up, grads);

    // one slot per layer; only the dropout layer's slot is filled
    REQUIRE(trace.dropout_scale.size() == 2);
    REQUIRE(trace.dropout_scale[0].empty());
    const auto& scale = trace.dropout_scale[1];
    REQUIRE(scale.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        // bias gradient is exactly the per-unit mask scale
        CHECK(grads.bias[0].v[i] == scale[i]);
        // and the forward output is the pre-dropout activation times it
        CHECK(y.v[i] == doctest::Approx(trace.acts[1].v[i] * scale[i]));
    }
}

TEST_CASE("first adam step moves by about the learning rate") {
    NetworkSpec spec;
    spec.input_shape = {1};
    spec.layers = {LayerSpec::dense(1)};
    Network net(std::move(spec));
    net.states()[0].weights.v = {1.0};
    net.states()[0].bias.v = {2.0};

    Gradients grads = net.make_zero_gradients();
    grads.weights[0].v = {0.5};
    grads.bias[0].v = {0.0};

    AdamOptimizer opt;
    opt.step(net, grads);

    CHECK(opt.step_count() == 1);
    CHECK(net.states()[0].weights.v[0] == doctest::Approx(1.0 - 0.001).epsilon(1e-6));
    CHECK(net.states()[0].bias.v[0] == 2.0); // zero gradient leaves it untouched
}

TEST_CASE("adam rejects non-finite gradients and names the layer") {
    NetworkSpec spec;
    spec.input_shape = {1};
    spec.layers = {LayerSpec::dense(1)};
    Network net(std::move(spec));

    Gradients grads = net.make_zero_gradients();
    grads.weights[0].v = {std::nan("")};

    AdamOptimizer opt;
    CHECK_THROWS_WITH_AS(opt.step(net, grads), doctest::Contains("layer 0"), numeric_error);
}

TEST_CASE("adam updates are deterministic across identical runs") {
    const auto make = [] {
        NetworkSpec spec;
        spec.input_shape = {4};
        spec.layers = {LayerSpec::dense(3), LayerSpec::sigmoid()};
        return seeded_network(std::move(spec), 51);
    };
    Network a = make(), b = make();

    AdamOptimizer oa, ob;
    Rng rng(52);
    const DArray x = random_unit_array(rng, {4});
    const DArray t = random_target(rng, {3});

    for (int step = 0; step < 10; ++step) {
        for (Network* net : {&a, &b}) {
            Network::Trace trace;
            const DArray y = net->forward(x, RunMode::train, &trace, nullptr);
            Gradients g = net->make_zero_gradients();
            net->backward(trace, bce_loss_grad(y, t), g);
            (net == &a ? oa : ob).step(*net, g);
        }
    }
    CHECK(a.states()[0].weights.v == b.states()[0].weights.v);
    CHECK(a.states()[0].bias.v == b.states()[0].bias.v);
}

TEST_CASE("binary cross-entropy on hand-computed values") {
    DArray half({2}, {0.5, 0.5});
    DArray t01({2}, {0.0, 1.0});
    CHECK(bce_loss(half, t01) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    DArray p({3}, {0.2, 0.7, 0.9});
    DArray t({3}, {0.0, 1.0, 1.0});
    const double expected = -(std::log(0.8) + std::log(0.7) + std::log(0.9)) / 3.0;
    CHECK(bce_loss(p, t) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("loss clamp keeps saturated predictions finite and flat") {
    DArray zero({1}, {0.0});
    DArray one({1}, {1.0});
    CHECK(bce_loss(zero, one) == doctest::Approx(-std::log(bce_epsilon)).epsilon(1e-9));
    CHECK(std::isfinite(bce_loss(one, zero)));

    // gradient is zero exactly where the clamp is active
    CHECK(bce_loss_grad(zero, one).v[0] == 0.0);
    CHECK(bce_loss_grad(one, zero).v[0] == 0.0);

    DArray p({2}, {0.5, 0.5});
    DArray bad({3}, {0.5, 0.5, 0.5});
    CHECK_THROWS_AS(bce_loss(p, bad), shape_error);
}

TEST_CASE("loss gradient matches finite differences of the loss") {
    Rng rng(61);
    DArray p({16});
    DArray t({16});
    for (double& v : p.v) v = 0.05 + 0.9 * rng.next_unit();
    for (double& v : t.v) v = rng.next_unit();

    const DArray g = bce_loss_grad(p, t);
    const double h = 1e-7;
    for (std::size_t i = 0; i < p.numel(); ++i) {
        DArray plus = p, minus = p;
        plus.v[i] += h;
        minus.v[i] -= h;
        const double fd = (bce_loss(plus, t) - bce_loss(minus, t)) / (2.0 * h);
        CHECK(g.v[i] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("forward rejects inputs of the wrong shape") {
    Network net(autoencoder_spec(DatasetKind::mnist, Variant::quanv, 2));
    DArray wrong({28, 28, 1});
    CHECK_THROWS_AS(net.forward(wrong), shape_error);
}

TEST_CASE("full autoencoder forward produces an image in (0, 1)") {
    Network net = seeded_network(autoencoder_spec(DatasetKind::mnist, Variant::classic, 2), 71);

    Rng rng(72);
    const DArray x = random_unit_array(rng, {28, 28, 1});
    const DArray y = net.forward(x);
    REQUIRE(y.shape == Shape{28, 28, 1});
    for (double v : y.v) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }

    // eval-mode forward is a pure function
    CHECK(net.forward(x).v == y.v);
}

TEST_CASE("shared decoder weights make the two variants agree on shared input") {
    // the quanv network equals the classic one minus its first block, so
    // feeding the classic block's output through either tail must match
    Network classic = seeded_network(autoencoder_spec(DatasetKind::mnist, Variant::classic, 2), 81);
    Network quanv(autoencoder_spec(DatasetKind::mnist, Variant::quanv, 2));

    for (std::size_t i = 0; i < quanv.states().size(); ++i) {
        quanv.states()[i] = classic.states()[i + 3];
    }

    Rng rng(82);
    const DArray image = random_unit_array(rng, {28, 28, 1});

    Network::Trace trace;
    const DArray full = classic.forward(image, RunMode::eval, &trace, nullptr);
    const DArray map = trace.acts[3]; // output of the block the quantum filter replaces
    REQUIRE(map.shape == Shape{7, 7, 16});

    const DArray tail = quanv.forward(map);
    CHECK(tail.v == full.v);
}
