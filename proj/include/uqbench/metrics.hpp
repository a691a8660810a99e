#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace uqbench {

/// Shannon entropy -sum p log p in nats (0 log 0 = 0). With `normalize` the
/// value is divided by log(n_classes), mapping it onto [0, 1].
double predictive_entropy(std::span<const double> p, bool normalize);

/// Equal-width confidence bins over (0, 1]: confidence c lands in bin m
/// (0-based) iff m/M < c <= (m+1)/M; c = 0 is assigned to the first bin.
std::size_t confidence_bin(double confidence, std::size_t bins);

struct EceBin {
    std::size_t count = 0;
    double acc = 0.0;
    double conf = 0.0;
};

struct EceReport {
    std::vector<EceBin> bins;
    double ece = 0.0;
    std::size_t n = 0;
};

/// Per-bin accuracy/confidence and their weighted absolute gap. Empty bins
/// contribute nothing.
EceReport ece_report(std::span<const double> confidences, const std::vector<bool>& correct,
                     std::size_t bins);

/// Counts at one threshold: a sample is "uncertain" iff its uncertainty is
/// strictly above the threshold. tc = correct & certain, tu = incorrect &
/// uncertain, fu = correct & uncertain, fc = incorrect & certain.
struct UncertaintyConfusion {
    std::size_t tu = 0;
    std::size_t tc = 0;
    std::size_t fu = 0;
    std::size_t fc = 0;
    double threshold = 0.0;

    std::size_t total() const { return tu + tc + fu + fc; }
};

UncertaintyConfusion uncertainty_confusion(const std::vector<bool>& correct,
                                           std::span<const double> uncertainty, double threshold);

/// Derived ratios; a metric with a zero denominator is reported as absent
/// rather than zero.
struct UncertaintyMetrics {
    std::optional<double> uacc;
    std::optional<double> usen;
    std::optional<double> uspe;
    std::optional<double> upre;
};

UncertaintyMetrics uncertainty_metrics(const UncertaintyConfusion& cm);

/// Mean predictive entropy of the correct and incorrect groups and their
/// difference (incorrect minus correct). An empty group leaves its mean and
/// the distance unset.
struct GroupStats {
    std::optional<double> mu_correct;
    std::optional<double> mu_incorrect;
    std::optional<double> distance;
    std::size_t n_correct = 0;
    std::size_t n_incorrect = 0;
};

GroupStats group_stats(std::span<const double> pe, const std::vector<bool>& correct);

}  // namespace uqbench
