// AVX2+FMA variant of the probe prefilter; compiled with -mavx2 -mfma on
// x86_64 only and selected at runtime. Must stay bit-identical to
// prefilter_scalar: every operation here (fmadd, floor, abs via and-mask,
// min, ordered-le compare) is the correctly rounded IEEE counterpart of the
// scalar sequence in detail::probe_candidate.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cstring>

#include "trackrun/prefilter.hpp"

namespace trackrun {

void prefilter_avx2(const ProbeBand* bands, std::size_t band_count,
                    std::uint64_t j_begin, std::size_t count,
                    std::uint64_t* mask_words) {
    std::memset(mask_words, 0, ((count + 63) / 64) * sizeof(std::uint64_t));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d abs_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d all_set = _mm256_castsi256_pd(_mm256_set1_epi64x(-1));

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const double j = static_cast<double>(j_begin + i);
        const __m256d jv = _mm256_setr_pd(j, j + 1.0, j + 2.0, j + 3.0);
        __m256d keep = all_set;
        for (std::size_t b = 0; b < band_count; ++b) {
            const __m256d step = _mm256_set1_pd(bands[b].step);
            const __m256d offset = _mm256_set1_pd(bands[b].offset);
            __m256d y = _mm256_fmadd_pd(jv, step, offset);
            y = _mm256_sub_pd(y, _mm256_floor_pd(y));
            const __m256d d0 =
                _mm256_and_pd(_mm256_sub_pd(y, _mm256_set1_pd(bands[b].center)), abs_mask);
            const __m256d dist = _mm256_min_pd(d0, _mm256_sub_pd(one, d0));
            const __m256d le =
                _mm256_cmp_pd(dist, _mm256_set1_pd(bands[b].threshold), _CMP_LE_OQ);
            keep = _mm256_and_pd(keep, le);
        }
        const int lane_mask = _mm256_movemask_pd(keep);
        if (lane_mask != 0) {
            mask_words[i >> 6] |= static_cast<std::uint64_t>(lane_mask) << (i & 63);
        }
    }
    for (; i < count; ++i) {
        if (detail::probe_candidate(bands, band_count,
                                    static_cast<double>(j_begin + i))) {
            mask_words[i >> 6] |= std::uint64_t(1) << (i & 63);
        }
    }
}

}  // namespace trackrun

#endif  // __x86_64__
