#include "yieldcast/mlp.hpp"

#include "yieldcast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace yieldcast::models {

namespace {

struct Layer {
    Eigen::MatrixXd w;  // fan_in x fan_out
    Eigen::RowVectorXd b;
};

void activate(Eigen::MatrixXd& z, MlpActivation a) {
    if (a == MlpActivation::Relu) z = z.cwiseMax(0.0);
    else z = z.array().tanh().matrix();
}

// Multiplies `delta` in place by the activation derivative evaluated from the activated output.
void activation_grad(Eigen::MatrixXd& delta, const Eigen::MatrixXd& activated, MlpActivation a) {
    if (a == MlpActivation::Relu) {
        delta = (activated.array() > 0.0).select(delta, 0.0);
    } else {
        delta = (delta.array() * (1.0 - activated.array().square())).matrix();
    }
}

class Mlp final : public Regressor {
public:
    Mlp(std::vector<Layer> layers, MlpActivation act) : layers_(std::move(layers)), act_(act) {}

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override {
        Eigen::MatrixXd h = x;
        for (std::size_t k = 0; k < layers_.size(); ++k) {
            Eigen::MatrixXd z = (h * layers_[k].w).rowwise() + layers_[k].b;
            if (k + 1 < layers_.size()) activate(z, act_);
            h = std::move(z);
        }
        return h.col(0);
    }

private:
    std::vector<Layer> layers_;
    MlpActivation act_;
};

}  // namespace

std::shared_ptr<const Regressor> fit_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                         const MlpSettings& settings, const ModelDefaults::Mlp& options,
                                         std::uint64_t seed, MlpTrace* trace) {
    Rng rng(seed);
    const Eigen::Index n = x.rows();
    std::vector<int> sizes{static_cast<int>(x.cols())};
    sizes.insert(sizes.end(), settings.hidden.begin(), settings.hidden.end());
    sizes.push_back(1);

    std::vector<Layer> layers;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        const int fan_in = std::max(1, sizes[k]);
        const double bound = std::sqrt(options.init_scale / fan_in);
        Layer l;
        l.w.resize(sizes[k], sizes[k + 1]);
        l.b.resize(sizes[k + 1]);
        for (Eigen::Index i = 0; i < l.w.size(); ++i) l.w.data()[i] = rng.uniform(-bound, bound);
        for (Eigen::Index i = 0; i < l.b.size(); ++i) l.b[i] = rng.uniform(-bound, bound);
        layers.push_back(std::move(l));
    }
    const std::size_t n_layers = layers.size();

    // Adam moments
    std::vector<Layer> m_state;
    std::vector<Layer> v_state;
    for (const auto& l : layers) {
        m_state.push_back(Layer{Eigen::MatrixXd::Zero(l.w.rows(), l.w.cols()), Eigen::RowVectorXd::Zero(l.b.size())});
        v_state.push_back(m_state.back());
    }

    const auto batch = static_cast<Eigen::Index>(std::clamp<long>(options.batch_size, 1, static_cast<long>(n)));
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    double lr = options.learning_rate_init;
    double best_loss = std::numeric_limits<double>::infinity();
    int stale = 0;
    long step = 0;
    int epoch = 0;
    bool converged = false;

    std::vector<Eigen::MatrixXd> acts(n_layers + 1);
    for (; epoch < options.max_epochs; ++epoch) {
        if (options.shuffle) {
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        }
        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < n; start += batch) {
            const Eigen::Index bs = std::min(batch, n - start);
            acts[0].resize(bs, x.cols());
            Eigen::VectorXd target(bs);
            for (Eigen::Index r = 0; r < bs; ++r) {
                const int src = order[static_cast<std::size_t>(start + r)];
                acts[0].row(r) = x.row(src);
                target[r] = y[src];
            }
            for (std::size_t k = 0; k < n_layers; ++k) {
                acts[k + 1] = (acts[k] * layers[k].w).rowwise() + layers[k].b;
                if (k + 1 < n_layers) activate(acts[k + 1], settings.activation);
            }
            Eigen::MatrixXd delta = acts[n_layers].col(0) - target;
            double weight_sq = 0.0;
            for (const auto& l : layers) weight_sq += l.w.squaredNorm();
            const double loss =
                0.5 * delta.squaredNorm() / static_cast<double>(bs) + 0.5 * settings.alpha * weight_sq / static_cast<double>(bs);
            epoch_loss += loss * static_cast<double>(bs);

            delta /= static_cast<double>(bs);
            ++step;
            const double bc1 = 1.0 - std::pow(options.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(options.beta2, static_cast<double>(step));
            for (std::size_t k = n_layers; k-- > 0;) {
                Eigen::MatrixXd gw = acts[k].transpose() * delta + (settings.alpha / static_cast<double>(bs)) * layers[k].w;
                Eigen::RowVectorXd gb = delta.colwise().sum();
                if (k > 0) {
                    delta = delta * layers[k].w.transpose();
                    activation_grad(delta, acts[k], settings.activation);
                }
                auto adam = [&](auto& param, auto& m, auto& v, const auto& g) {
                    m = options.beta1 * m + (1.0 - options.beta1) * g;
                    v = (options.beta2 * v.array() + (1.0 - options.beta2) * g.array().square()).matrix();
                    param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + options.epsilon);
                };
                adam(layers[k].w, m_state[k].w, v_state[k].w, gw);
                adam(layers[k].b, m_state[k].b, v_state[k].b, gb);
            }
        }
        epoch_loss /= static_cast<double>(n);
        if (!std::isfinite(epoch_loss)) break;
        if (trace) trace->losses.push_back(epoch_loss);

        if (epoch_loss < best_loss - options.early_stop_tol) {
            best_loss = epoch_loss;
            stale = 0;
        } else {
            ++stale;
            if (settings.adaptive && stale % options.adaptive_patience == 0) lr *= 0.5;
        }
        if (epoch_loss < best_loss) best_loss = epoch_loss;
        if (stale >= options.early_stop_patience) {
            converged = true;
            ++epoch;
            break;
        }
    }
    if (trace) {
        trace->epochs = epoch;
        trace->converged = converged;
        trace->final_learning_rate = lr;
    }
    return std::make_shared<Mlp>(std::move(layers), settings.activation);
}

}  // namespace yieldcast::models
