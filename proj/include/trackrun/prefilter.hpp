#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace trackrun {

// Double-precision probe model for one runner during the Kronecker grid
// search: position at probe j is approximately frac(offset + j*step), and
// the probe stays a candidate when the circle distance to `center` is at
// most `threshold` (the exact acceptance band widened by a certified error
// bound, so rejections are sound and every true hit survives).
struct ProbeBand {
    double offset;
    double step;
    double center;
    double threshold;
};

// Writes one bit per probe into mask_words (LSB-first within each word):
// 1 = candidate, 0 = certified rejectable. count probes starting at j_begin.
using PrefilterFn = void (*)(const ProbeBand* bands, std::size_t band_count,
                             std::uint64_t j_begin, std::size_t count,
                             std::uint64_t* mask_words);

void prefilter_scalar(const ProbeBand* bands, std::size_t band_count,
                      std::uint64_t j_begin, std::size_t count,
                      std::uint64_t* mask_words);

#if defined(__x86_64__)
void prefilter_avx2(const ProbeBand* bands, std::size_t band_count,
                    std::uint64_t j_begin, std::size_t count,
                    std::uint64_t* mask_words);
#endif

// Picks the widest variant the CPU supports. Scalar and SIMD variants are
// bit-identical (fma/floor/min/compare are all correctly rounded IEEE ops).
PrefilterFn select_prefilter();
const char* prefilter_backend();

namespace detail {

// Reference per-probe predicate; the scalar kernel and SIMD tail loops use
// exactly this sequence of operations.
inline bool probe_candidate(const ProbeBand* bands, std::size_t band_count, double j) {
    for (std::size_t b = 0; b < band_count; ++b) {
        double y = std::fma(j, bands[b].step, bands[b].offset);
        y -= std::floor(y);
        const double d0 = std::fabs(y - bands[b].center);
        const double dist = d0 < 1.0 - d0 ? d0 : 1.0 - d0;
        if (!(dist <= bands[b].threshold)) return false;
    }
    return true;
}

}  // namespace detail

}  // namespace trackrun
