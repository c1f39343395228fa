#pragma once

#include <cstdint>
#include <memory>

#include "smem/surrogate.hpp"

namespace smem {

struct SvmTrainStats {
    long steps = 0;        // successful multiplier updates
    long sweeps = 0;       // examine-all sweeps
    long support_count = 0;
    bool converged = false;
    double training_accuracy = 0.0;
};

// Soft-margin RBF kernel machine over concatenated pair features, trained by
// sequential minimal optimization. Pair samples are concatenations of two
// rows of a small half-feature table, so the RBF kernel factors into a
// product of two half kernels:
//   K(concat(u1,u2), concat(v1,v2)) = exp(-g|u1-v1|^2) * exp(-g|u2-v2|^2).
// Training therefore needs only an n_half x n_half kernel table, and the
// decision function collapses to a bilinear form
//   f(z1,z2) = ex(z1)^T W ex(z2) + b,  ex(z)[h] = exp(-g|z - half_h|^2),
// with W holding alpha*y at each training pair's (first, second) cell. Full
// round-robin scoring then reduces to dense matrix products.
class PairRbfSvm final : public SurrogateModel {
public:
    PairRbfSvm(Eigen::MatrixXf halves, Eigen::MatrixXf pair_weights, double bias, double gamma,
               long training_size, SvmTrainStats stats);

    SurrogateKind kind() const override { return SurrogateKind::svm; }
    long training_size() const override { return training_size_; }

    float decision(const Eigen::Ref<const Eigen::VectorXf>& first,
                   const Eigen::Ref<const Eigen::VectorXf>& second) const override;

    std::vector<int> round_robin_scores(const Eigen::MatrixXf& features, int threads = 1) const override;

    nlohmann::json to_json() const override;

    const SvmTrainStats& stats() const { return stats_; }
    double gamma() const { return gamma_; }
    double bias() const { return bias_; }
    const Eigen::MatrixXf& pair_weights() const { return pair_weights_; }

private:
    Eigen::MatrixXf halves_;       // n_half x d
    Eigen::MatrixXf pair_weights_; // n_half x n_half, alpha*y at (first, second)
    double bias_ = 0.0;
    double gamma_ = 0.0;
    long training_size_ = 0;
    SvmTrainStats stats_;
};

std::unique_ptr<PairRbfSvm> train_svm(const PairDataset& ds, const SurrogateConfig& cfg, Rng& rng);

} // namespace smem
