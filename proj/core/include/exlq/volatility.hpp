#pragma once

#include "exlq/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace exlq {

/// I.i.d. observations partitioned into batch_count contiguous batches of
/// batch_size each. Observations beyond batch_count*batch_size are ignored
/// (the count is reported by estimate_bounds).
class BatchedSamples {
public:
    BatchedSamples(std::vector<double> data, std::size_t batch_count, std::size_t batch_size);

    /// Derives batch_size = data.size() / batch_count.
    static BatchedSamples with_batch_count(std::vector<double> data, std::size_t batch_count);

    std::size_t batch_count() const { return batch_count_; }
    std::size_t batch_size() const { return batch_size_; }
    std::span<const double> batch(std::size_t k) const;
    std::size_t discarded() const { return data_.size() - batch_count_ * batch_size_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::vector<double> data_;
    std::size_t batch_count_;
    std::size_t batch_size_;
};

/// Per-batch variance with divisor n (population form), not n-1.
double batch_variance(std::span<const double> batch);

/// Result of the batch min/max variance estimator.
struct BoundsEstimate {
    double lower_sq = 0.0;
    double upper_sq = 0.0;
    bool degenerate_lower = false; ///< lower variance is 0 (constant batch)
    std::size_t discarded = 0;     ///< trailing observations not used
    std::vector<double> batch_variances;

    /// Converts to validated bounds; throws InvalidParameter when degenerate.
    AmbiguityBounds to_bounds() const;
};

/// Estimates the volatility-uncertainty interval as (min_k var_k, max_k var_k)
/// over the per-batch variances. A zero lower estimate is returned as-is with
/// the degenerate flag set instead of failing.
BoundsEstimate estimate_bounds(const BatchedSamples& samples);

} // namespace exlq
