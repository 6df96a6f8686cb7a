#include "scd/eval.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace scd {

ConfusionMatrix::ConfusionMatrix(int num_classes) : classes_(num_classes) {
    if (num_classes < 1)
        throw std::invalid_argument("ConfusionMatrix: need at least one class");
    counts_.assign(static_cast<std::size_t>(num_classes) * num_classes, 0u);
}

std::uint64_t ConfusionMatrix::at(int gt, int pred) const {
    if (gt < 0 || gt >= classes_ || pred < 0 || pred >= classes_)
        throw std::out_of_range("ConfusionMatrix: class index out of range");
    return counts_[static_cast<std::size_t>(gt) * classes_ + pred];
}

void ConfusionMatrix::add(int gt, int pred, std::uint64_t count) {
    if (gt < 0 || gt >= classes_ || pred < 0 || pred >= classes_)
        throw std::out_of_range("ConfusionMatrix: class index out of range");
    counts_[static_cast<std::size_t>(gt) * classes_ + pred] += count;
}

void ConfusionMatrix::accumulate(const ConfusionMatrix& other) {
    if (other.classes_ != classes_)
        throw std::invalid_argument("ConfusionMatrix: class count mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::uint64_t ConfusionMatrix::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ConfusionMatrix confusion(std::span<const ChangeClass> pred, std::span<const ChangeClass> gt,
                          int num_classes) {
    if (pred.size() != gt.size())
        throw std::invalid_argument("confusion: rasters differ in size");
    ConfusionMatrix cm(num_classes);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int p = static_cast<int>(pred[i]);
        const int g = static_cast<int>(gt[i]);
        if (p >= num_classes || g >= num_classes)
            throw std::invalid_argument("confusion: code out of range at pixel " +
                                        std::to_string(i));
        cm.add(g, p);
    }
    return cm;
}

ConfusionMatrix confusion(const ChangeMap& pred, const ChangeMap& gt, int num_classes) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw std::invalid_argument("confusion: dimension mismatch");
    return confusion(std::span<const ChangeClass>(pred.codes),
                     std::span<const ChangeClass>(gt.codes), num_classes);
}

IouReport miou(const ConfusionMatrix& cm, bool empty_scores_zero) {
    IouReport report;
    report.per_class.resize(static_cast<std::size_t>(cm.num_classes()));

    double sum = 0.0;
    int counted = 0;
    for (int k = 0; k < cm.num_classes(); ++k) {
        std::uint64_t row = 0, col = 0;
        for (int j = 0; j < cm.num_classes(); ++j) {
            row += cm.at(k, j);
            col += cm.at(j, k);
        }
        const std::uint64_t diag = cm.at(k, k);
        const std::uint64_t uni = row + col - diag;
        if (uni == 0) {
            if (empty_scores_zero) {
                report.per_class[k] = 0.0;
                ++counted;
            }
            continue;
        }
        const double iou = static_cast<double>(diag) / static_cast<double>(uni);
        report.per_class[k] = iou;
        sum += iou;
        ++counted;
    }
    report.mean = counted == 0 ? 0.0 : sum / counted;
    return report;
}

ConfusionMatrix collapse_binary(const ConfusionMatrix& cm) {
    ConfusionMatrix binary(2);
    for (int g = 0; g < cm.num_classes(); ++g)
        for (int p = 0; p < cm.num_classes(); ++p)
            binary.add(g == 0 ? 0 : 1, p == 0 ? 0 : 1, cm.at(g, p));
    return binary;
}

double f1_binary(const ConfusionMatrix& cm) {
    const ConfusionMatrix b = cm.num_classes() == 2 ? cm : collapse_binary(cm);
    const double tp = static_cast<double>(b.at(1, 1));
    const double fp = static_cast<double>(b.at(0, 1));
    const double fn = static_cast<double>(b.at(1, 0));
    const double denom = 2.0 * tp + fp + fn;
    return denom == 0.0 ? 1.0 : 2.0 * tp / denom;
}

} // namespace scd
