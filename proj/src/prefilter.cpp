#include "trackrun/prefilter.hpp"

#include <cstring>

namespace trackrun {

void prefilter_scalar(const ProbeBand* bands, std::size_t band_count,
                      std::uint64_t j_begin, std::size_t count,
                      std::uint64_t* mask_words) {
    std::memset(mask_words, 0, ((count + 63) / 64) * sizeof(std::uint64_t));
    for (std::size_t i = 0; i < count; ++i) {
        if (detail::probe_candidate(bands, band_count,
                                    static_cast<double>(j_begin + i))) {
            mask_words[i >> 6] |= std::uint64_t(1) << (i & 63);
        }
    }
}

PrefilterFn select_prefilter() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return prefilter_avx2;
    }
#endif
    return prefilter_scalar;
}

const char* prefilter_backend() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return "avx2";
    }
#endif
    return "scalar";
}

}  // namespace trackrun
