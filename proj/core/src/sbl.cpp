#include "scd/sbl.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace scd {

FeatureTensor::FeatureTensor(int layer, int channels, int height, int width)
    : layer(layer), channels(channels), height(height), width(width) {
    if (channels < 1 || height < 1 || width < 1)
        throw std::invalid_argument("FeatureTensor: dimensions must be >= 1");
    values.assign(static_cast<std::size_t>(channels) * height * width, 0.0);
}

ChannelStats capture_stats(const FeatureTensor& z) {
    ChannelStats s;
    s.mean.resize(static_cast<std::size_t>(z.channels));
    s.stddev.resize(static_cast<std::size_t>(z.channels));
    const std::size_t plane = static_cast<std::size_t>(z.height) * z.width;
    for (int c = 0; c < z.channels; ++c) {
        const double* p = z.values.data() + static_cast<std::size_t>(c) * plane;
        double sum = 0.0;
        for (std::size_t i = 0; i < plane; ++i) sum += p[i];
        const double mu = sum / static_cast<double>(plane);
        double sq = 0.0;
        for (std::size_t i = 0; i < plane; ++i) {
            const double d = p[i] - mu;
            sq += d * d;
        }
        s.mean[c] = mu;
        s.stddev[c] = std::sqrt(sq / static_cast<double>(plane));
    }
    return s;
}

FeatureTensor apply_stats(const FeatureTensor& z, const ChannelStats& reference, double eps) {
    if (reference.channels() != static_cast<std::size_t>(z.channels))
        throw std::invalid_argument("apply_stats: channel count mismatch (" +
                                    std::to_string(reference.channels()) + " vs " +
                                    std::to_string(z.channels) + ")");

    const ChannelStats own = capture_stats(z);
    FeatureTensor out = z;
    const std::size_t plane = static_cast<std::size_t>(z.height) * z.width;
    for (int c = 0; c < z.channels; ++c) {
        const double scale = reference.stddev[c] / std::max(own.stddev[c], eps);
        const double mu_own = own.mean[c];
        const double mu_ref = reference.mean[c];
        double* p = out.values.data() + static_cast<std::size_t>(c) * plane;
        for (std::size_t i = 0; i < plane; ++i) p[i] = scale * (p[i] - mu_own) + mu_ref;
    }
    return out;
}

namespace {

// splitmix64; gives stable pseudo-random weights with no RNG state to carry.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_weight(std::uint64_t key) {
    return (static_cast<double>(mix(key) >> 11) / 9007199254740992.0) - 0.5; // [-0.5, 0.5)
}

double leaky_relu(double v) { return v >= 0.0 ? v : 0.1 * v; }

FeatureTensor conv3x3(const FeatureTensor& in, const std::vector<double>& kernel,
                      int out_channels, int layer_tag) {
    FeatureTensor out(layer_tag, out_channels, in.height, in.width);
    for (int co = 0; co < out_channels; ++co) {
        for (int y = 0; y < in.height; ++y) {
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                for (int ci = 0; ci < in.channels; ++ci) {
                    for (int ky = -1; ky <= 1; ++ky) {
                        const int sy = y + ky;
                        if (sy < 0 || sy >= in.height) continue;
                        for (int kx = -1; kx <= 1; ++kx) {
                            const int sx = x + kx;
                            if (sx < 0 || sx >= in.width) continue;
                            const std::size_t k =
                                ((static_cast<std::size_t>(co) * in.channels + ci) * 3 +
                                 (ky + 1)) * 3 + (kx + 1);
                            acc += kernel[k] * in.at(ci, sy, sx);
                        }
                    }
                }
                out.at(co, y, x) = acc;
            }
        }
    }
    return out;
}

FeatureTensor avgpool2(const FeatureTensor& in) {
    if (in.height < 2 || in.width < 2) return in;
    FeatureTensor out(in.layer, in.channels, in.height / 2, in.width / 2);
    for (int c = 0; c < in.channels; ++c)
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x)
                out.at(c, y, x) = 0.25 * (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y, 2 * x + 1) +
                                          in.at(c, 2 * y + 1, 2 * x) +
                                          in.at(c, 2 * y + 1, 2 * x + 1));
    return out;
}

} // namespace

ToyEncoder::ToyEncoder(int layers, int channels) : layers_(layers), channels_(channels) {
    if (layers < 1)
        throw std::invalid_argument("ToyEncoder: needs at least one layer");
    if (channels < 1)
        throw std::invalid_argument("ToyEncoder: needs at least one channel");

    weights_.resize(static_cast<std::size_t>(layers));
    for (int l = 0; l < layers; ++l) {
        const int in_ch = (l == 0) ? 1 : channels;
        const double scale = 1.0 / std::sqrt(9.0 * in_ch);
        std::vector<double>& k = weights_[l];
        k.resize(static_cast<std::size_t>(channels) * in_ch * 9);
        for (std::size_t i = 0; i < k.size(); ++i)
            k[i] = scale * unit_weight((static_cast<std::uint64_t>(l) << 32) + i);
    }
}

std::vector<FeatureTensor> ToyEncoder::forward(const LabelRaster& image,
                                               const std::vector<ChannelStats>* saved,
                                               int sbl_count,
                                               std::vector<ChannelStats>* captured) const {
    if (image.width < 1 || image.height < 1)
        throw std::invalid_argument("ToyEncoder: empty image");
    if (sbl_count < 0 || sbl_count > layers_)
        throw std::invalid_argument("ToyEncoder: sbl_count out of range [0, layers]");
    if (saved && static_cast<int>(saved->size()) < sbl_count)
        throw std::invalid_argument("ToyEncoder: fewer recorded stats than sbl_count");

    FeatureTensor z(0, 1, image.height, image.width);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            z.at(0, y, x) = static_cast<double>(image.at(x, y)) / 255.0;

    std::vector<FeatureTensor> slots;
    slots.reserve(static_cast<std::size_t>(layers_));
    for (int l = 0; l < layers_; ++l) {
        if (l == 0) {
            z = conv3x3(z, weights_[0], channels_, 0);
        } else {
            FeatureTensor branch = conv3x3(z, weights_[l], channels_, l);
            for (std::size_t i = 0; i < z.values.size(); ++i)
                z.values[i] += leaky_relu(branch.values[i]);
            z.layer = l;
        }

        if (captured) captured->push_back(capture_stats(z));
        if (saved && l < sbl_count) z = apply_stats(z, (*saved)[l]);

        slots.push_back(z);
        if (l == 0) {
            for (double& v : z.values) v = leaky_relu(v);
        }
        if (l + 1 < layers_) z = avgpool2(z);
    }
    return slots;
}

EncodeResult ToyEncoder::encode_record(const LabelRaster& image) const {
    EncodeResult result;
    result.features = forward(image, nullptr, 0, &result.stats);
    return result;
}

std::vector<FeatureTensor> ToyEncoder::encode_apply(const LabelRaster& image,
                                                    const std::vector<ChannelStats>& saved,
                                                    int sbl_count) const {
    return forward(image, &saved, sbl_count, nullptr);
}

double feature_distance(const FeatureTensor& a, const FeatureTensor& b) {
    if (a.channels != b.channels || a.height != b.height || a.width != b.width)
        throw std::invalid_argument("feature_distance: shape mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(a.values.size()));
}

} // namespace scd
