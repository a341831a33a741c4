#include "exlq/volatility.hpp"

#include <algorithm>
#include <cmath>

namespace exlq {

BatchedSamples::BatchedSamples(std::vector<double> data, std::size_t batch_count,
                               std::size_t batch_size)
    : data_(std::move(data)), batch_count_(batch_count), batch_size_(batch_size) {
    if (batch_count_ < 2) {
        throw InvalidParameter("BatchedSamples: need at least 2 batches");
    }
    if (batch_size_ < 2) {
        throw InvalidParameter("BatchedSamples: need at least 2 observations per batch");
    }
    if (batch_count_ * batch_size_ > data_.size()) {
        throw InvalidParameter("BatchedSamples: batch_count * batch_size exceeds data length");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw NonFiniteInput("BatchedSamples: non-finite observation");
        }
    }
}

BatchedSamples BatchedSamples::with_batch_count(std::vector<double> data,
                                                std::size_t batch_count) {
    if (batch_count == 0) {
        throw InvalidParameter("BatchedSamples: batch_count must be positive");
    }
    const std::size_t n = data.size() / batch_count;
    return BatchedSamples(std::move(data), batch_count, n);
}

std::span<const double> BatchedSamples::batch(std::size_t k) const {
    if (k >= batch_count_) {
        throw InvalidParameter("BatchedSamples: batch index out of range");
    }
    return std::span<const double>(data_).subspan(k * batch_size_, batch_size_);
}

double batch_variance(std::span<const double> batch) {
    const std::size_t n = batch.size();
    if (n < 2) {
        throw InvalidParameter("batch_variance: need at least 2 observations");
    }
    double mean = 0.0;
    for (double v : batch) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : batch) {
        const double d = v - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(n);
}

AmbiguityBounds BoundsEstimate::to_bounds() const {
    if (degenerate_lower) {
        throw InvalidParameter("BoundsEstimate: lower variance estimate is 0 (constant batch)");
    }
    return AmbiguityBounds(lower_sq, upper_sq);
}

BoundsEstimate estimate_bounds(const BatchedSamples& samples) {
    BoundsEstimate out;
    out.discarded = samples.discarded();
    out.batch_variances.reserve(samples.batch_count());
    for (std::size_t k = 0; k < samples.batch_count(); ++k) {
        out.batch_variances.push_back(batch_variance(samples.batch(k)));
    }
    out.lower_sq = *std::min_element(out.batch_variances.begin(), out.batch_variances.end());
    out.upper_sq = *std::max_element(out.batch_variances.begin(), out.batch_variances.end());
    out.degenerate_lower = out.lower_sq <= 0.0;
    return out;
}

} // namespace exlq
