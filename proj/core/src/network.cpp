#include "quanv/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quanv {

DArray::DArray(Shape s, std::vector<double> d) : shape(std::move(s)), v(std::move(d)) {
    if (shape_numel(shape) != v.size()) {
        throw shape_error("array data length does not match shape " + shape_to_string(shape));
    }
}

DArray DArray::from_tensor(const Tensor& t) {
    DArray a;
    a.shape = t.shape;
    a.v.assign(t.data.begin(), t.data.end());
    return a;
}

Tensor DArray::to_tensor() const {
    std::vector<float> f(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) f[i] = static_cast<float>(v[i]);
    return Tensor(shape, std::move(f));
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
    shapes_ = infer_shapes(spec_);
    states_.resize(spec_.layers.size());

    Shape in = spec_.input_shape;
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
        const LayerSpec& layer = spec_.layers[i];
        LayerState& st = states_[i];
        if (layer.kind == LayerKind::Conv2D) {
            const auto kh = static_cast<std::uint32_t>(layer.kernel_h);
            const auto kw = static_cast<std::uint32_t>(layer.kernel_w);
            const auto cout = static_cast<std::uint32_t>(layer.filters);
            st.weights = DArray({kh, kw, in[2], cout});
            st.bias = DArray({cout});
        } else if (layer.kind == LayerKind::Dense) {
            st.weights = DArray({in[0], static_cast<std::uint32_t>(layer.units)});
            st.bias = DArray({static_cast<std::uint32_t>(layer.units)});
        }
        if (st.trainable()) {
            st.m_weights = DArray(st.weights.shape);
            st.v_weights = DArray(st.weights.shape);
            st.m_bias = DArray(st.bias.shape);
            st.v_bias = DArray(st.bias.shape);
        }
        in = shapes_[i];
    }
}

void Network::init_weights(Rng& rng) {
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
        LayerState& st = states_[i];
        if (!st.trainable()) continue;
        const LayerSpec& layer = spec_.layers[i];
        std::size_t fan_in = 0;
        if (layer.kind == LayerKind::Conv2D) {
            fan_in = static_cast<std::size_t>(layer.kernel_h) * static_cast<std::size_t>(layer.kernel_w) *
                     st.weights.shape[2];
        } else {
            fan_in = st.weights.shape[0];
        }
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (double& w : st.weights.v) w = rng.uniform(-bound, bound);
        std::fill(st.bias.v.begin(), st.bias.v.end(), 0.0);
        std::fill(st.m_weights.v.begin(), st.m_weights.v.end(), 0.0);
        std::fill(st.v_weights.v.begin(), st.v_weights.v.end(), 0.0);
        std::fill(st.m_bias.v.begin(), st.m_bias.v.end(), 0.0);
        std::fill(st.v_bias.v.begin(), st.v_bias.v.end(), 0.0);
    }
}

namespace {

struct PadInfo {
    int beg_h = 0;
    int beg_w = 0;
};

PadInfo pad_begin(const Shape& in, const Shape& out, const LayerSpec& layer) {
    PadInfo p;
    if (layer.padding == Padding::Same) {
        const long th = (static_cast<long>(out[0]) - 1) * layer.stride + layer.kernel_h -
                        static_cast<long>(in[0]);
        const long tw = (static_cast<long>(out[1]) - 1) * layer.stride + layer.kernel_w -
                        static_cast<long>(in[1]);
        p.beg_h = static_cast<int>(std::max(th, 0l) / 2);
        p.beg_w = static_cast<int>(std::max(tw, 0l) / 2);
    }
    return p;
}

void conv2d_forward(const DArray& x, const LayerSpec& layer, const LayerState& st,
                    const Shape& out_shape, DArray& y) {
    const std::size_t cin = x.shape[2], cout = out_shape[2];
    const PadInfo pad = pad_begin(x.shape, out_shape, layer);
    const double* w = st.weights.v.data();
    for (std::size_t oy = 0; oy < out_shape[0]; ++oy) {
        for (std::size_t ox = 0; ox < out_shape[1]; ++ox) {
            double* orow = &y.at(oy, ox, 0);
            std::copy(st.bias.v.begin(), st.bias.v.end(), orow);
            for (int ky = 0; ky < layer.kernel_h; ++ky) {
                const long iy = static_cast<long>(oy) * layer.stride - pad.beg_h + ky;
                if (iy < 0 || iy >= static_cast<long>(x.shape[0])) continue;
                for (int kx = 0; kx < layer.kernel_w; ++kx) {
                    const long ix = static_cast<long>(ox) * layer.stride - pad.beg_w + kx;
                    if (ix < 0 || ix >= static_cast<long>(x.shape[1])) continue;
                    const double* xrow = &x.at(static_cast<std::size_t>(iy), static_cast<std::size_t>(ix), 0);
                    const double* wrow = w + (static_cast<std::size_t>(ky * layer.kernel_w + kx)) * cin * cout;
                    for (std::size_t ci = 0; ci < cin; ++ci) {
                        const double xv = xrow[ci];
                        const double* wv = wrow + ci * cout;
                        for (std::size_t co = 0; co < cout; ++co) orow[co] += xv * wv[co];
                    }
                }
            }
        }
    }
}

void conv2d_backward(const DArray& x, const DArray& dy, const LayerSpec& layer,
                     const LayerState& st, DArray& dx, DArray& dw, DArray& db) {
    const std::size_t cin = x.shape[2], cout = dy.shape[2];
    const PadInfo pad = pad_begin(x.shape, dy.shape, layer);
    const double* w = st.weights.v.data();
    double* dwp = dw.v.data();
    for (std::size_t oy = 0; oy < dy.shape[0]; ++oy) {
        for (std::size_t ox = 0; ox < dy.shape[1]; ++ox) {
            const double* dyrow = &dy.at(oy, ox, 0);
            for (std::size_t co = 0; co < cout; ++co) db.v[co] += dyrow[co];
            for (int ky = 0; ky < layer.kernel_h; ++ky) {
                const long iy = static_cast<long>(oy) * layer.stride - pad.beg_h + ky;
                if (iy < 0 || iy >= static_cast<long>(x.shape[0])) continue;
                for (int kx = 0; kx < layer.kernel_w; ++kx) {
                    const long ix = static_cast<long>(ox) * layer.stride - pad.beg_w + kx;
                    if (ix < 0 || ix >= static_cast<long>(x.shape[1])) continue;
                    const std::size_t base = static_cast<std::size_t>(ky * layer.kernel_w + kx) * cin * cout;
                    const double* xrow = &x.at(static_cast<std::size_t>(iy), static_cast<std::size_t>(ix), 0);
                    double* dxrow = &dx.at(static_cast<std::size_t>(iy), static_cast<std::size_t>(ix), 0);
                    for (std::size_t ci = 0; ci < cin; ++ci) {
                        const double xv = xrow[ci];
                        const double* wv = w + base + ci * cout;
                        double* dwv = dwp + base + ci * cout;
                        double acc = 0.0;
                        for (std::size_t co = 0; co < cout; ++co) {
                            dwv[co] += xv * dyrow[co];
                            acc += wv[co] * dyrow[co];
                        }
                        dxrow[ci] += acc;
                    }
                }
            }
        }
    }
}

void max_pool_forward(const DArray& x, const LayerSpec& layer, const Shape& out_shape, DArray& y,
                      std::vector<std::uint32_t>* argmax) {
    const std::size_t c = x.shape[2];
    const PadInfo pad = pad_begin(x.shape, out_shape, layer);
    if (argmax) argmax->assign(shape_numel(out_shape), 0);
    std::size_t out_idx = 0;
    for (std::size_t oy = 0; oy < out_shape[0]; ++oy) {
        for (std::size_t ox = 0; ox < out_shape[1]; ++ox) {
            for (std::size_t ch = 0; ch < c; ++ch, ++out_idx) {
                double best = -std::numeric_limits<double>::infinity();
                std::uint32_t best_at = 0;
                for (int ky = 0; ky < layer.kernel_h; ++ky) {
                    const long iy = static_cast<long>(oy) * layer.stride - pad.beg_h + ky;
                    if (iy < 0 || iy >= static_cast<long>(x.shape[0])) continue;
                    for (int kx = 0; kx < layer.kernel_w; ++kx) {
                        const long ix = static_cast<long>(ox) * layer.stride - pad.beg_w + kx;
                        if (ix < 0 || ix >= static_cast<long>(x.shape[1])) continue;
                        const std::size_t at =
                            (static_cast<std::size_t>(iy) * x.shape[1] + static_cast<std::size_t>(ix)) * c + ch;
                        if (x.v[at] > best) { // first maximum wins on ties
                            best = x.v[at];
                            best_at = static_cast<std::uint32_t>(at);
                        }
                    }
                }
                y.v[out_idx] = best;
                if (argmax) (*argmax)[out_idx] = best_at;
            }
        }
    }
}

void up_sample_forward(const DArray& x, int scale, DArray& y) {
    const std::size_t c = x.shape[2];
    const auto f = static_cast<std::size_t>(scale);
    for (std::size_t oy = 0; oy < y.shape[0]; ++oy) {
        const std::size_t iy = oy / f;
        for (std::size_t ox = 0; ox < y.shape[1]; ++ox) {
            const std::size_t ix = ox / f;
            const double* src = &x.at(iy, ix, 0);
            double* dst = &y.at(oy, ox, 0);
            std::copy(src, src + c, dst);
        }
    }
}

void up_sample_backward(const DArray& dy, int scale, DArray& dx) {
    const std::size_t c = dx.shape[2];
    const auto f = static_cast<std::size_t>(scale);
    for (std::size_t oy = 0; oy < dy.shape[0]; ++oy) {
        const std::size_t iy = oy / f;
        for (std::size_t ox = 0; ox < dy.shape[1]; ++ox) {
            const std::size_t ix = ox / f;
            const double* src = &dy.at(oy, ox, 0);
            double* dst = &dx.at(iy, ix, 0);
            for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += src[ch];
        }
    }
}

void dense_forward(const DArray& x, const LayerState& st, DArray& y) {
    const std::size_t in = x.numel(), out = y.numel();
    std::copy(st.bias.v.begin(), st.bias.v.end(), y.v.begin());
    const double* w = st.weights.v.data();
    for (std::size_t i = 0; i < in; ++i) {
        const double xv = x.v[i];
        const double* wv = w + i * out;
        for (std::size_t o = 0; o < out; ++o) y.v[o] += xv * wv[o];
    }
}

void dense_backward(const DArray& x, const DArray& dy, const LayerState& st, DArray& dx,
                    DArray& dw, DArray& db) {
    const std::size_t in = x.numel(), out = dy.numel();
    for (std::size_t o = 0; o < out; ++o) db.v[o] += dy.v[o];
    const double* w = st.weights.v.data();
    double* dwp = dw.v.data();
    for (std::size_t i = 0; i < in; ++i) {
        const double xv = x.v[i];
        const double* wv = w + i * out;
        double* dwv = dwp + i * out;
        double acc = 0.0;
        for (std::size_t o = 0; o < out; ++o) {
            dwv[o] += xv * dy.v[o];
            acc += wv[o] * dy.v[o];
        }
        dx.v[i] = acc;
    }
}

} // namespace

DArray Network::forward(const DArray& input) const {
    return forward(input, RunMode::eval, nullptr, nullptr);
}

DArray Network::forward(const DArray& input, RunMode mode, Trace* trace, Rng* rng) const {
    if (input.shape != spec_.input_shape) {
        throw shape_error("network input " + shape_to_string(input.shape) + " does not match spec " +
                          shape_to_string(spec_.input_shape));
    }
    if (trace) {
        trace->acts.clear();
        trace->acts.reserve(spec_.layers.size() + 1);
        trace->acts.push_back(input);
        trace->argmax.assign(spec_.layers.size(), {});
        trace->dropout_scale.assign(spec_.layers.size(), {});
    }

    DArray cur = input;
    for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
        const LayerSpec& layer = spec_.layers[i];
        const LayerState& st = states_[i];
        DArray next(shapes_[i]);
        switch (layer.kind) {
        case LayerKind::Conv2D:
            conv2d_forward(cur, layer, st, shapes_[i], next);
            break;
        case LayerKind::ReLU:
            for (std::size_t j = 0; j < cur.numel(); ++j) next.v[j] = cur.v[j] > 0.0 ? cur.v[j] : 0.0;
            break;
        case LayerKind::MaxPool:
            max_pool_forward(cur, layer, shapes_[i], next, trace ? &trace->argmax[i] : nullptr);
            break;
        case LayerKind::UpSample:
            up_sample_forward(cur, layer.scale, next);
            break;
        case LayerKind::Flatten:
        case LayerKind::Reshape:
            next.v = cur.v;
            break;
        case LayerKind::Dense:
            dense_forward(cur, st, next);
            break;
        case LayerKind::Tanh:
            for (std::size_t j = 0; j < cur.numel(); ++j) next.v[j] = std::tanh(cur.v[j]);
            break;
        case LayerKind::Sigmoid:
            for (std::size_t j = 0; j < cur.numel(); ++j) next.v[j] = 1.0 / (1.0 + std::exp(-cur.v[j]));
            break;
        case LayerKind::Dropout: {
            if (mode == RunMode::train) {
                if (!rng) throw state_error("train-mode forward through dropout needs an rng");
                const double keep_scale = 1.0 / (1.0 - layer.rate);
                std::vector<double> scale(cur.numel());
                for (std::size_t j = 0; j < cur.numel(); ++j) {
                    scale[j] = rng->next_unit() >= layer.rate ? keep_scale : 0.0;
                    next.v[j] = cur.v[j] * scale[j];
                }
                if (trace) trace->dropout_scale[i] = std::move(scale);
            } else {
                next.v = cur.v;
            }
            break;
        }
        }
        if (trace) trace->acts.push_back(next);
        cur = std::move(next);
    }
    return cur;
}

Gradients Network::make_zero_gradients() const {
    Gradients g;
    g.weights.resize(states_.size());
    g.bias.resize(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].trainable()) {
            g.weights[i] = DArray(states_[i].weights.shape);
            g.bias[i] = DArray(states_[i].bias.shape);
        }
    }
    return g;
}

void Network::backward(const Trace& trace, const DArray& output_grad, Gradients& grads) const {
    if (trace.acts.size() != spec_.layers.size() + 1) {
        throw state_error("backward needs a trace from a train-mode forward");
    }
    if (output_grad.shape != output_shape()) {
        throw shape_error("output gradient " + shape_to_string(output_grad.shape) +
                          " does not match network output " + shape_to_string(output_shape()));
    }

    DArray dy = output_grad;
    for (std::size_t ri = spec_.layers.size(); ri-- > 0;) {
        const LayerSpec& layer = spec_.layers[ri];
        const LayerState& st = states_[ri];
        const DArray& x = trace.acts[ri];
        const DArray& y = trace.acts[ri + 1];
        DArray dx(x.shape);
        switch (layer.kind) {
        case LayerKind::Conv2D:
            conv2d_backward(x, dy, layer, st, dx, grads.weights[ri], grads.bias[ri]);
            break;
        case LayerKind::ReLU:
            for (std::size_t j = 0; j < x.numel(); ++j) dx.v[j] = x.v[j] > 0.0 ? dy.v[j] : 0.0;
            break;
        case LayerKind::MaxPool: {
            const auto& argmax = trace.argmax[ri];
            if (argmax.size() != dy.numel()) throw state_error("max-pool trace missing");
            for (std::size_t j = 0; j < dy.numel(); ++j) dx.v[argmax[j]] += dy.v[j];
            break;
        }
        case LayerKind::UpSample:
            up_sample_backward(dy, layer.scale, dx);
            break;
        case LayerKind::Flatten:
        case LayerKind::Reshape:
            dx.v = dy.v;
            break;
        case LayerKind::Dense:
            dense_backward(x, dy, st, dx, grads.weights[ri], grads.bias[ri]);
            break;
        case LayerKind::Tanh:
            for (std::size_t j = 0; j < x.numel(); ++j) dx.v[j] = (1.0 - y.v[j] * y.v[j]) * dy.v[j];
            break;
        case LayerKind::Sigmoid:
            for (std::size_t j = 0; j < x.numel(); ++j) dx.v[j] = y.v[j] * (1.0 - y.v[j]) * dy.v[j];
            break;
        case LayerKind::Dropout: {
            const auto& scale = trace.dropout_scale[ri];
            if (scale.empty()) {
                dx.v = dy.v; // eval-mode trace: dropout was identity
            } else {
                for (std::size_t j = 0; j < x.numel(); ++j) dx.v[j] = dy.v[j] * scale[j];
            }
            break;
        }
        }
        dy = std::move(dx);
    }
}

void AdamOptimizer::step(Network& net, const Gradients& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

    auto update = [&](DArray& param, DArray& m, DArray& v, const DArray& g, std::size_t layer) {
        for (std::size_t j = 0; j < param.numel(); ++j) {
            const double gj = g.v[j];
            if (!std::isfinite(gj)) {
                throw numeric_error("non-finite gradient in layer " + std::to_string(layer));
            }
            m.v[j] = cfg_.beta1 * m.v[j] + (1.0 - cfg_.beta1) * gj;
            v.v[j] = cfg_.beta2 * v.v[j] + (1.0 - cfg_.beta2) * gj * gj;
            const double mhat = m.v[j] / bc1;
            const double vhat = v.v[j] / bc2;
            param.v[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.epsilon);
        }
    };

    auto& states = net.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!states[i].trainable()) continue;
        update(states[i].weights, states[i].m_weights, states[i].v_weights, grads.weights[i], i);
        update(states[i].bias, states[i].m_bias, states[i].v_bias, grads.bias[i], i);
    }
}

double bce_loss(const DArray& pred, const DArray& target) {
    if (pred.shape != target.shape) {
        throw shape_error("bce: prediction " + shape_to_string(pred.shape) + " vs target " +
                          shape_to_string(target.shape));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double p = std::clamp(pred.v[i], bce_epsilon, 1.0 - bce_epsilon);
        const double t = target.v[i];
        total -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    }
    return total / static_cast<double>(pred.numel());
}

DArray bce_loss_grad(const DArray& pred, const DArray& target) {
    if (pred.shape != target.shape) {
        throw shape_error("bce: prediction " + shape_to_string(pred.shape) + " vs target " +
                          shape_to_string(target.shape));
    }
    DArray g(pred.shape);
    const double inv_n = 1.0 / static_cast<double>(pred.numel());
    for (std::size_t i = 0; i < pred.numel(); ++i) {
        const double raw = pred.v[i];
        if (raw < bce_epsilon || raw > 1.0 - bce_epsilon) {
            g.v[i] = 0.0; // clamp active: locally constant
            continue;
        }
        const double t = target.v[i];
        g.v[i] = inv_n * (raw - t) / (raw * (1.0 - raw));
    }
    return g;
}

} // namespace quanv
