#include "smem/surrogate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <thread>

#include "smem/error.hpp"
#include "smem/svm.hpp"

namespace smem {

std::string to_string(SurrogateKind kind) {
    switch (kind) {
        case SurrogateKind::svm: return "svm";
        case SurrogateKind::knn: return "knn";
        case SurrogateKind::rf: return "rf";
        case SurrogateKind::mlp: return "mlp";
    }
    return "svm";
}

SurrogateKind surrogate_kind_from_string(const std::string& s) {
    if (s == "svm") return SurrogateKind::svm;
    if (s == "knn") return SurrogateKind::knn;
    if (s == "rf") return SurrogateKind::rf;
    if (s == "mlp") return SurrogateKind::mlp;
    throw data_error("unknown surrogate kind '" + s + "' (expected svm|knn|rf|mlp)");
}

Eigen::MatrixXf pairwise_sqdist(const Eigen::MatrixXf& a, const Eigen::MatrixXf& b) {
    Eigen::MatrixXf d = -2.0f * (a * b.transpose());
    d.colwise() += a.rowwise().squaredNorm();
    d.rowwise() += b.rowwise().squaredNorm().transpose();
    return d.cwiseMax(0.0f);
}

// Generic round robin: fixed block grid, one pure decision() per (i, j).
std::vector<int> SurrogateModel::round_robin_scores(const Eigen::MatrixXf& features, int threads) const {
    const Eigen::Index n = features.rows();
    std::vector<int> scores(static_cast<std::size_t>(n), 0);
    if (n < 2) return scores;

    constexpr Eigen::Index kBlock = 64;
    const Eigen::Index num_blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<int>> partial(static_cast<std::size_t>(num_blocks));
    std::atomic<Eigen::Index> next{0};
    auto work = [&]() {
        for (;;) {
            const Eigen::Index blk = next.fetch_add(1);
            if (blk >= num_blocks) return;
            std::vector<int>& local = partial[static_cast<std::size_t>(blk)];
            local.assign(static_cast<std::size_t>(n), 0);
            const Eigen::Index r0 = blk * kBlock;
            const Eigen::Index r1 = std::min(r0 + kBlock, n);
            Eigen::VectorXf fi, fj;
            for (Eigen::Index i = r0; i < r1; ++i) {
                fi = features.row(i);
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    fj = features.row(j);
                    const float d = decision(fi, fj);
                    ++local[static_cast<std::size_t>(d >= 0.0f ? i : j)];
                }
            }
        }
    };
    const int worker_count = std::max(1, threads);
    if (worker_count == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < worker_count; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& local : partial)
        if (!local.empty())
            for (Eigen::Index k = 0; k < n; ++k) scores[static_cast<std::size_t>(k)] += local[static_cast<std::size_t>(k)];
    return scores;
}

Verdict compare(const SurrogateModel& model, const Eigen::Ref<const Eigen::VectorXf>& f1,
                const Eigen::Ref<const Eigen::VectorXf>& f2) {
    return model.decision(f1, f2) >= 0.0f ? Verdict::first_better : Verdict::second_better;
}

Verdict compare(const SurrogateModel& model, const Genotype& g1, const Genotype& g2,
                const SearchSpaceConfig& cfg) {
    const Eigen::VectorXf f1 = to_features(canonicalize(g1, cfg), cfg);
    const Eigen::VectorXf f2 = to_features(canonicalize(g2, cfg), cfg);
    return compare(model, f1, f2);
}

std::vector<int> rank_candidates(const SurrogateModel& model, const std::vector<Genotype>& candidates,
                                 const SearchSpaceConfig& cfg, int threads) {
    return model.round_robin_scores(feature_matrix(candidates, cfg), threads);
}

namespace {

Eigen::MatrixXf materialize(const PairDataset& ds) {
    const Eigen::Index d = ds.halves.cols();
    Eigen::MatrixXf x(static_cast<Eigen::Index>(ds.size()), 2 * d);
    for (std::size_t k = 0; k < ds.size(); ++k) {
        x.row(static_cast<Eigen::Index>(k)).head(d) = ds.halves.row(ds.first[k]);
        x.row(static_cast<Eigen::Index>(k)).tail(d) = ds.halves.row(ds.second[k]);
    }
    return x;
}

class DegenerateModel final : public SurrogateModel {
public:
    DegenerateModel(SurrogateKind kind, int label, long training_size)
        : kind_(kind), label_(label), training_size_(training_size) {}

    SurrogateKind kind() const override { return kind_; }
    long training_size() const override { return training_size_; }
    bool degenerate() const override { return true; }
    float decision(const Eigen::Ref<const Eigen::VectorXf>&, const Eigen::Ref<const Eigen::VectorXf>&) const override {
        return label_ ? 1.0f : -1.0f;
    }
    nlohmann::json to_json() const override {
        return {{"kind", "degenerate"}, {"base_kind", to_string(kind_)}, {"label", label_},
                {"training_size", training_size_}};
    }

private:
    SurrogateKind kind_;
    int label_;
    long training_size_;
};

class KnnModel final : public SurrogateModel {
public:
    KnnModel(Eigen::MatrixXf halves, std::vector<std::uint32_t> first, std::vector<std::uint32_t> second,
             std::vector<std::int8_t> labels, int k)
        : halves_(std::move(halves)), first_(std::move(first)), second_(std::move(second)),
          labels_(std::move(labels)), k_(std::min<std::size_t>(static_cast<std::size_t>(k), labels_.size())) {}

    SurrogateKind kind() const override { return SurrogateKind::knn; }
    long training_size() const override { return static_cast<long>(labels_.size()); }

    float decision(const Eigen::Ref<const Eigen::VectorXf>& f1,
                   const Eigen::Ref<const Eigen::VectorXf>& f2) const override {
        const Eigen::VectorXf d1 = (halves_.rowwise() - f1.transpose()).rowwise().squaredNorm();
        const Eigen::VectorXf d2 = (halves_.rowwise() - f2.transpose()).rowwise().squaredNorm();
        // Concatenated-feature distance splits across the two halves.
        std::vector<std::size_t> idx(labels_.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        const auto dist = [&](std::size_t k) { return d1[first_[k]] + d2[second_[k]]; };
        std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k_), idx.end(),
                          [&](std::size_t a, std::size_t b) {
                              const float da = dist(a), db = dist(b);
                              return da < db || (da == db && a < b);
                          });
        int votes = 0;
        for (std::size_t r = 0; r < k_; ++r) votes += labels_[idx[r]] ? 1 : -1;
        return static_cast<float>(votes);
    }

    nlohmann::json to_json() const override;

private:
    Eigen::MatrixXf halves_;
    std::vector<std::uint32_t> first_, second_;
    std::vector<std::int8_t> labels_;
    std::size_t k_;
};

struct TreeNode {
    int feature = -1; // -1: leaf
    float threshold = 0.0f;
    int left = -1;
    int right = -1;
    float value = 0.0f; // leaf: 2*p(label 1) - 1
};

class ForestModel final : public SurrogateModel {
public:
    ForestModel(std::vector<std::vector<TreeNode>> trees, long training_size)
        : trees_(std::move(trees)), training_size_(training_size) {}

    SurrogateKind kind() const override { return SurrogateKind::rf; }
    long training_size() const override { return training_size_; }

    float decision(const Eigen::Ref<const Eigen::VectorXf>& f1,
                   const Eigen::Ref<const Eigen::VectorXf>& f2) const override {
        const Eigen::Index d = f1.size();
        auto at = [&](int feature) { return feature < d ? f1[feature] : f2[feature - d]; };
        float sum = 0.0f;
        for (const auto& tree : trees_) {
            int node = 0;
            while (tree[static_cast<std::size_t>(node)].feature >= 0) {
                const TreeNode& t = tree[static_cast<std::size_t>(node)];
                node = at(t.feature) <= t.threshold ? t.left : t.right;
            }
            sum += tree[static_cast<std::size_t>(node)].value;
        }
        return sum / static_cast<float>(trees_.size());
    }

    nlohmann::json to_json() const override;

    const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }

private:
    std::vector<std::vector<TreeNode>> trees_;
    long training_size_;
};

class MlpModel final : public SurrogateModel {
public:
    MlpModel(Eigen::MatrixXf w1, Eigen::VectorXf b1, Eigen::VectorXf w2, float b2, long training_size)
        : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2), training_size_(training_size) {}

    SurrogateKind kind() const override { return SurrogateKind::mlp; }
    long training_size() const override { return training_size_; }

    float decision(const Eigen::Ref<const Eigen::VectorXf>& f1,
                   const Eigen::Ref<const Eigen::VectorXf>& f2) const override {
        Eigen::VectorXf x(f1.size() + f2.size());
        x << f1, f2;
        return (w1_ * x + b1_).array().tanh().matrix().dot(w2_) + b2_;
    }

    nlohmann::json to_json() const override;

private:
    Eigen::MatrixXf w1_; // hidden x input
    Eigen::VectorXf b1_;
    Eigen::VectorXf w2_;
    float b2_;
    long training_size_;
};

std::unique_ptr<SurrogateModel> train_knn(const PairDataset& ds, const SurrogateConfig& cfg) {
    return std::make_unique<KnnModel>(ds.halves, ds.first, ds.second, ds.labels, cfg.knn_k);
}

// One CART split search over a random feature subset.
struct TreeBuilder {
    const Eigen::MatrixXf& x;
    const std::vector<std::int8_t>& y;
    const SurrogateConfig& cfg;
    Rng& rng;
    std::vector<TreeNode> nodes;

    int build(std::vector<std::uint32_t>& samples, int depth) {
        long ones = 0;
        for (auto s : samples) ones += y[s] ? 1 : 0;
        const long total = static_cast<long>(samples.size());
        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(node_id)].value =
            2.0f * static_cast<float>(ones) / static_cast<float>(total) - 1.0f;
        if (depth >= cfg.rf_max_depth || ones == 0 || ones == total ||
            total < 2 * cfg.rf_min_leaf)
            return node_id;

        const int dim = static_cast<int>(x.cols());
        int mtry = static_cast<int>(std::lround(std::ceil(std::sqrt(static_cast<double>(dim)))));
        mtry = std::min(mtry, dim);
        std::vector<int> feats(static_cast<std::size_t>(dim));
        std::iota(feats.begin(), feats.end(), 0);
        for (int f = 0; f < mtry; ++f)
            std::swap(feats[static_cast<std::size_t>(f)],
                      feats[static_cast<std::size_t>(uniform_int(rng, f, dim - 1))]);

        double best_gain = 1e-12;
        int best_feat = -1;
        float best_thr = 0.0f;
        const double parent_gini =
            1.0 - std::pow(static_cast<double>(ones) / total, 2) -
            std::pow(static_cast<double>(total - ones) / total, 2);
        std::vector<std::uint32_t> order;
        for (int f = 0; f < mtry; ++f) {
            const int feat = feats[static_cast<std::size_t>(f)];
            order = samples;
            std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
                return x(a, feat) < x(b, feat) || (x(a, feat) == x(b, feat) && a < b);
            });
            long left_ones = 0;
            for (long i = 0; i + 1 < total; ++i) {
                left_ones += y[order[static_cast<std::size_t>(i)]] ? 1 : 0;
                const float v = x(order[static_cast<std::size_t>(i)], feat);
                const float v_next = x(order[static_cast<std::size_t>(i + 1)], feat);
                if (v == v_next) continue;
                const long nl = i + 1, nr = total - nl;
                if (nl < cfg.rf_min_leaf || nr < cfg.rf_min_leaf) continue;
                const double pl = static_cast<double>(left_ones) / nl;
                const double pr = static_cast<double>(ones - left_ones) / nr;
                const double gini_l = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl);
                const double gini_r = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr);
                const double gain = parent_gini - (nl * gini_l + nr * gini_r) / total;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feat = feat;
                    best_thr = 0.5f * (v + v_next);
                }
            }
        }
        if (best_feat < 0) return node_id;

        std::vector<std::uint32_t> left, right;
        for (auto s : samples)
            (x(s, best_feat) <= best_thr ? left : right).push_back(s);
        if (left.empty() || right.empty()) return node_id;
        samples.clear();
        samples.shrink_to_fit();
        nodes[static_cast<std::size_t>(node_id)].feature = best_feat;
        nodes[static_cast<std::size_t>(node_id)].threshold = best_thr;
        const int l = build(left, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].left = l;
        const int r = build(right, depth + 1);
        nodes[static_cast<std::size_t>(node_id)].right = r;
        return node_id;
    }
};

std::unique_ptr<SurrogateModel> train_rf(const PairDataset& ds, const SurrogateConfig& cfg, Rng& rng) {
    const Eigen::MatrixXf x = materialize(ds);
    const long n = static_cast<long>(ds.size());
    std::vector<std::vector<TreeNode>> trees;
    trees.reserve(static_cast<std::size_t>(cfg.rf_trees));
    for (int t = 0; t < cfg.rf_trees; ++t) {
        std::vector<std::uint32_t> bootstrap(static_cast<std::size_t>(n));
        for (auto& s : bootstrap) s = static_cast<std::uint32_t>(uniform_int(rng, 0, static_cast<int>(n) - 1));
        TreeBuilder builder{x, ds.labels, cfg, rng, {}};
        builder.build(bootstrap, 0);
        trees.push_back(std::move(builder.nodes));
    }
    return std::make_unique<ForestModel>(std::move(trees), n);
}

std::unique_ptr<SurrogateModel> train_mlp(const PairDataset& ds, const SurrogateConfig& cfg, Rng& rng) {
    const Eigen::MatrixXf x = materialize(ds);
    const Eigen::Index n = x.rows(), dim = x.cols();
    const Eigen::Index h = cfg.mlp_hidden;
    Eigen::VectorXf y(n);
    for (Eigen::Index k = 0; k < n; ++k) y[k] = ds.labels[static_cast<std::size_t>(k)] ? 1.0f : 0.0f;

    const float scale = std::sqrt(6.0f / static_cast<float>(dim + h));
    auto init = [&](Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXf m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                m(r, c) = static_cast<float>(uniform_real(rng, -scale, scale));
        return m;
    };
    Eigen::MatrixXf w1 = init(h, dim);
    Eigen::VectorXf b1 = Eigen::VectorXf::Zero(h);
    Eigen::VectorXf w2 = init(h, 1);
    float b2 = 0.0f;

    // Adam state
    Eigen::MatrixXf m1 = Eigen::MatrixXf::Zero(h, dim), v1 = m1;
    Eigen::VectorXf mb1 = Eigen::VectorXf::Zero(h), vb1 = mb1, m2 = mb1, v2 = mb1;
    float mb2 = 0.0f, vb2 = 0.0f;
    const float lr = static_cast<float>(cfg.mlp_lr), beta1 = 0.9f, beta2 = 0.999f, eps = 1e-8f;
    long step = 0;

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const Eigen::Index batch = std::min<Eigen::Index>(std::max(1, cfg.mlp_batch), n);
    for (int epoch = 0; epoch < cfg.mlp_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (Eigen::Index start = 0; start + batch <= n; start += batch) {
            Eigen::MatrixXf xb(batch, dim);
            Eigen::VectorXf yb(batch);
            for (Eigen::Index r = 0; r < batch; ++r) {
                xb.row(r) = x.row(order[static_cast<std::size_t>(start + r)]);
                yb[r] = y[order[static_cast<std::size_t>(start + r)]];
            }
            const Eigen::MatrixXf a = ((xb * w1.transpose()).rowwise() + b1.transpose()).array().tanh();
            const Eigen::VectorXf logits = a * w2 + Eigen::VectorXf::Constant(batch, b2);
            const Eigen::VectorXf grad_logit =
                (1.0f / (1.0f + (-logits.array()).exp()) - yb.array()).matrix() / static_cast<float>(batch);
            const Eigen::VectorXf g_w2 = a.transpose() * grad_logit;
            const float g_b2 = grad_logit.sum();
            const Eigen::MatrixXf ga =
                (grad_logit * w2.transpose()).array() * (1.0f - a.array().square());
            const Eigen::MatrixXf g_w1 = ga.transpose() * xb;
            const Eigen::VectorXf g_b1 = ga.colwise().sum();

            ++step;
            const float c1 = 1.0f - std::pow(beta1, static_cast<float>(step));
            const float c2 = 1.0f - std::pow(beta2, static_cast<float>(step));
            auto adam = [&](auto& w, auto& m, auto& v, const auto& g) {
                m = beta1 * m + (1.0f - beta1) * g;
                v = (beta2 * v.array() + (1.0f - beta2) * g.array().square()).matrix();
                w -= (lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps)).matrix();
            };
            adam(w1, m1, v1, g_w1);
            adam(b1, mb1, vb1, g_b1);
            adam(w2, m2, v2, g_w2);
            mb2 = beta1 * mb2 + (1.0f - beta1) * g_b2;
            vb2 = beta2 * vb2 + (1.0f - beta2) * g_b2 * g_b2;
            b2 -= lr * (mb2 / c1) / (std::sqrt(vb2 / c2) + eps);
        }
    }
    return std::make_unique<MlpModel>(std::move(w1), std::move(b1), std::move(w2), b2, n);
}

PairDataset symmetric_augment(const PairDataset& ds) {
    PairDataset out = ds;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        out.first.push_back(ds.second[k]);
        out.second.push_back(ds.first[k]);
        out.labels.push_back(ds.labels[k] ? 0 : 1);
    }
    return out;
}

} // namespace

std::unique_ptr<SurrogateModel> train_surrogate(const PairDataset& ds, const SurrogateConfig& cfg, Rng& rng) {
    if (ds.size() == 0) throw data_error("surrogate: empty training set");
    long ones = 0;
    for (auto l : ds.labels) ones += l ? 1 : 0;
    if (ones == 0 || ones == static_cast<long>(ds.size())) {
        std::fprintf(stderr, "warning: pair training set has a single class; using constant model\n");
        return std::make_unique<DegenerateModel>(cfg.kind, ds.labels.front(), static_cast<long>(ds.size()));
    }
    const PairDataset* data = &ds;
    PairDataset augmented;
    if (cfg.symmetric_pairs) {
        augmented = symmetric_augment(ds);
        data = &augmented;
    }
    switch (cfg.kind) {
        case SurrogateKind::svm: return train_svm(*data, cfg, rng);
        case SurrogateKind::knn: return train_knn(*data, cfg);
        case SurrogateKind::rf: return train_rf(*data, cfg, rng);
        case SurrogateKind::mlp: return train_mlp(*data, cfg, rng);
    }
    throw internal_error("unhandled surrogate kind");
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXf& m) {
    std::vector<std::vector<float>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows[static_cast<std::size_t>(r)].assign(m.row(r).begin(), m.row(r).end());
    return rows;
}

Eigen::MatrixXf matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.get<std::vector<std::vector<float>>>();
    if (rows.empty()) return {};
    Eigen::MatrixXf m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return m;
}

nlohmann::json KnnModel::to_json() const {
    return {{"kind", "knn"},           {"k", k_},      {"halves", matrix_to_json(halves_)},
            {"first", first_},         {"second", second_},
            {"labels", std::vector<int>(labels_.begin(), labels_.end())},
            {"training_size", training_size()}};
}

nlohmann::json ForestModel::to_json() const {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : trees_) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& t : tree) nodes.push_back({t.feature, t.threshold, t.left, t.right, t.value});
        trees.push_back(std::move(nodes));
    }
    return {{"kind", "rf"}, {"trees", std::move(trees)}, {"training_size", training_size_}};
}

nlohmann::json MlpModel::to_json() const {
    return {{"kind", "mlp"},
            {"w1", matrix_to_json(w1_)},
            {"b1", std::vector<float>(b1_.begin(), b1_.end())},
            {"w2", std::vector<float>(w2_.begin(), w2_.end())},
            {"b2", b2_},
            {"training_size", training_size_}};
}

} // namespace

std::unique_ptr<SurrogateModel> surrogate_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "degenerate") {
        return std::make_unique<DegenerateModel>(surrogate_kind_from_string(j.at("base_kind").get<std::string>()),
                                                 j.at("label").get<int>(), j.at("training_size").get<long>());
    }
    if (kind == "svm") {
        Eigen::MatrixXf halves = matrix_from_json(j.at("halves"));
        Eigen::MatrixXf weights = Eigen::MatrixXf::Zero(halves.rows(), halves.rows());
        for (const auto& cell : j.at("weights"))
            weights(cell[0].get<Eigen::Index>(), cell[1].get<Eigen::Index>()) = cell[2].get<float>();
        return std::make_unique<PairRbfSvm>(std::move(halves), std::move(weights), j.at("bias").get<double>(),
                                            j.at("gamma").get<double>(), j.at("training_size").get<long>(),
                                            SvmTrainStats{});
    }
    if (kind == "knn") {
        const auto labels = j.at("labels").get<std::vector<int>>();
        return std::make_unique<KnnModel>(matrix_from_json(j.at("halves")),
                                          j.at("first").get<std::vector<std::uint32_t>>(),
                                          j.at("second").get<std::vector<std::uint32_t>>(),
                                          std::vector<std::int8_t>(labels.begin(), labels.end()),
                                          j.at("k").get<int>());
    }
    if (kind == "rf") {
        std::vector<std::vector<TreeNode>> trees;
        for (const auto& tj : j.at("trees")) {
            std::vector<TreeNode> tree;
            for (const auto& nj : tj)
                tree.push_back({nj[0].get<int>(), nj[1].get<float>(), nj[2].get<int>(), nj[3].get<int>(),
                                nj[4].get<float>()});
            trees.push_back(std::move(tree));
        }
        return std::make_unique<ForestModel>(std::move(trees), j.at("training_size").get<long>());
    }
    if (kind == "mlp") {
        const auto b1 = j.at("b1").get<std::vector<float>>();
        const auto w2 = j.at("w2").get<std::vector<float>>();
        return std::make_unique<MlpModel>(
            matrix_from_json(j.at("w1")),
            Eigen::Map<const Eigen::VectorXf>(b1.data(), static_cast<Eigen::Index>(b1.size())),
            Eigen::Map<const Eigen::VectorXf>(w2.data(), static_cast<Eigen::Index>(w2.size())),
            j.at("b2").get<float>(), j.at("training_size").get<long>());
    }
    throw data_error("unknown surrogate model kind in JSON: " + kind);
}

void save_surrogate(const SurrogateModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write model file: " + path);
    out << model.to_json().dump() << '\n';
}

std::unique_ptr<SurrogateModel> load_surrogate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return surrogate_from_json(j);
}

} // namespace smem
