#include "levy2b/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace levy2b::simd {

namespace {

const Ops& select() {
    const char* pref = std::getenv("LEVY2B_SIMD");
    if (pref != nullptr && std::strcmp(pref, "scalar") == 0) return scalar_ops();
    if (pref != nullptr && std::strcmp(pref, "avx2") == 0) {
        const Ops* v = avx2_ops();
        return v != nullptr ? *v : scalar_ops();
    }
    // auto
    const Ops* v = avx2_ops();
    return v != nullptr ? *v : scalar_ops();
}

}  // namespace

const Ops& ops() {
    static const Ops& selected = select();
    return selected;
}

}  // namespace levy2b::simd
