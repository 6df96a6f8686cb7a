#ifndef SCD_SBL_HPP
#define SCD_SBL_HPP

#include <cstdint>
#include <vector>

#include "scd/mask.hpp"

namespace scd {

/// Dense C x H x W activation block produced by one encoder stage.
struct FeatureTensor {
    int layer = 0;
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> values; // [c][y][x] row-major

    FeatureTensor() = default;
    FeatureTensor(int layer, int channels, int height, int width);

    double at(int c, int y, int x) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double& at(int c, int y, int x) {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    friend bool operator==(const FeatureTensor&, const FeatureTensor&) = default;
};

/// Per-channel mean and population standard deviation over spatial positions.
struct ChannelStats {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::size_t channels() const { return mean.size(); }
    friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

ChannelStats capture_stats(const FeatureTensor& z);

/// Re-normalizes each channel of z to the recorded reference statistics:
/// out = sigma_ref * (z - mu_z) / max(sigma_z, eps) + mu_ref.
/// The eps floor applies only inside the division, so re-applying a tensor's
/// own stats reproduces it exactly.
FeatureTensor apply_stats(const FeatureTensor& z, const ChannelStats& reference,
                          double eps = 1e-5);

struct EncodeResult {
    std::vector<FeatureTensor> features; // one per normalization slot
    std::vector<ChannelStats> stats;     // captured at each slot
};

/// Fixed-weight convolutional stack standing in for a tracker backbone.
/// Slot 0 sits right after the first convolution; each further slot sits
/// after the residual addition of one block. Recording captures statistics
/// without touching the features; applying substitutes recorded statistics
/// at the first sbl_count slots.
class ToyEncoder {
public:
    explicit ToyEncoder(int layers, int channels = 6);

    int layers() const noexcept { return layers_; }
    int channels() const noexcept { return channels_; }

    EncodeResult encode_record(const LabelRaster& image) const;
    std::vector<FeatureTensor> encode_apply(const LabelRaster& image,
                                            const std::vector<ChannelStats>& saved,
                                            int sbl_count) const;

private:
    std::vector<FeatureTensor> forward(const LabelRaster& image,
                                       const std::vector<ChannelStats>* saved,
                                       int sbl_count,
                                       std::vector<ChannelStats>* captured) const;

    int layers_;
    int channels_;
    std::vector<std::vector<double>> weights_; // per stage, conv kernels
};

/// Root-mean-square difference between two equally shaped tensors.
double feature_distance(const FeatureTensor& a, const FeatureTensor& b);

} // namespace scd

#endif // SCD_SBL_HPP
