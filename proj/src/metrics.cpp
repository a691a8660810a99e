#include "uqbench/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "uqbench/numerics.hpp"

namespace uqbench {

double predictive_entropy(std::span<const double> p, bool normalize) {
    double h = 0.0;
    for (double v : p) {
        h -= v * std::log(v > kProbFloor ? v : kProbFloor);
    }
    if (h < 0.0) h = 0.0;
    if (normalize) h /= std::log(static_cast<double>(p.size()));
    return h;
}

std::size_t confidence_bin(double confidence, std::size_t bins) {
    if (confidence <= 0.0) return 0;
    // m such that m/M < c <= (m+1)/M
    std::size_t m = static_cast<std::size_t>(std::ceil(confidence * static_cast<double>(bins))) - 1;
    return m < bins ? m : bins - 1;
}

EceReport ece_report(std::span<const double> confidences, const std::vector<bool>& correct,
                     std::size_t bins) {
    if (confidences.empty() || confidences.size() != correct.size()) {
        throw std::invalid_argument("ece_report: inputs must be non-empty and equal length");
    }
    if (bins < 1) throw std::invalid_argument("ece_report: need at least one bin");

    EceReport report;
    report.n = confidences.size();
    report.bins.assign(bins, EceBin{});
    for (std::size_t i = 0; i < confidences.size(); ++i) {
        EceBin& bin = report.bins[confidence_bin(confidences[i], bins)];
        bin.count += 1;
        bin.conf += confidences[i];
        bin.acc += correct[i] ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(report.n);
    for (EceBin& bin : report.bins) {
        if (bin.count == 0) continue;
        bin.acc /= static_cast<double>(bin.count);
        bin.conf /= static_cast<double>(bin.count);
        report.ece += static_cast<double>(bin.count) / n * std::abs(bin.acc - bin.conf);
    }
    return report;
}

UncertaintyConfusion uncertainty_confusion(const std::vector<bool>& correct,
                                           std::span<const double> uncertainty, double threshold) {
    if (correct.size() != uncertainty.size()) {
        throw std::invalid_argument("uncertainty_confusion: input length mismatch");
    }
    UncertaintyConfusion cm;
    cm.threshold = threshold;
    for (std::size_t i = 0; i < correct.size(); ++i) {
        const bool uncertain = uncertainty[i] > threshold;
        if (correct[i]) {
            uncertain ? ++cm.fu : ++cm.tc;
        } else {
            uncertain ? ++cm.tu : ++cm.fc;
        }
    }
    return cm;
}

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

UncertaintyMetrics uncertainty_metrics(const UncertaintyConfusion& cm) {
    UncertaintyMetrics m;
    m.uacc = ratio(cm.tu + cm.tc, cm.total());
    m.usen = ratio(cm.tu, cm.tu + cm.fc);
    m.uspe = ratio(cm.tc, cm.tc + cm.fu);
    m.upre = ratio(cm.tu, cm.tu + cm.fu);
    return m;
}

GroupStats group_stats(std::span<const double> pe, const std::vector<bool>& correct) {
    if (pe.size() != correct.size()) {
        throw std::invalid_argument("group_stats: input length mismatch");
    }
    GroupStats stats;
    double sum_correct = 0.0;
    double sum_incorrect = 0.0;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        if (correct[i]) {
            sum_correct += pe[i];
            ++stats.n_correct;
        } else {
            sum_incorrect += pe[i];
            ++stats.n_incorrect;
        }
    }
    if (stats.n_correct > 0) stats.mu_correct = sum_correct / static_cast<double>(stats.n_correct);
    if (stats.n_incorrect > 0) {
        stats.mu_incorrect = sum_incorrect / static_cast<double>(stats.n_incorrect);
    }
    if (stats.mu_correct && stats.mu_incorrect) {
        stats.distance = *stats.mu_incorrect - *stats.mu_correct;
    }
    return stats;
}

}  // namespace uqbench
