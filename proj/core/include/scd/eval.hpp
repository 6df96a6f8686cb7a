#ifndef SCD_EVAL_HPP
#define SCD_EVAL_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scd/change.hpp"

namespace scd {

/// Square count matrix; rows are ground-truth classes, columns predictions.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int num_classes);

    int num_classes() const noexcept { return classes_; }
    std::uint64_t at(int gt, int pred) const;
    void add(int gt, int pred, std::uint64_t count = 1);
    void accumulate(const ConfusionMatrix& other);
    std::uint64_t total() const noexcept;

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    int classes_;
    std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const ChangeClass> pred, std::span<const ChangeClass> gt,
                          int num_classes = kNumChangeClasses);
ConfusionMatrix confusion(const ChangeMap& pred, const ChangeMap& gt,
                          int num_classes = kNumChangeClasses);

struct IouReport {
    std::vector<std::optional<double>> per_class; // nullopt where the union is empty
    double mean = 0.0;
};

/// Per-class IoU and its mean. Classes absent from both prediction and
/// ground truth are excluded from the mean by default; with
/// empty_scores_zero they count as 0 instead.
IouReport miou(const ConfusionMatrix& cm, bool empty_scores_zero = false);

/// Collapses all nonzero classes into one "changed" class.
ConfusionMatrix collapse_binary(const ConfusionMatrix& cm);

/// F1 of the changed-vs-unchanged classification: 2TP / (2TP + FP + FN).
double f1_binary(const ConfusionMatrix& cm);

} // namespace scd

#endif // SCD_EVAL_HPP
