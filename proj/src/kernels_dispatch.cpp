// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "msp/kernels.hpp"

namespace msp::kernels {

Table make_scalar_table();
#ifdef MSP_HAVE_AVX2_BUILD
Table make_avx2_table();
#endif

namespace {

bool detect_avx2() {
#ifdef MSP_HAVE_AVX2_BUILD
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect_isa() {
    if (const char* env = std::getenv("MSP_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!detect_avx2()) throw std::runtime_error("MSP_KERNELS=avx2 but CPU lacks AVX2/FMA");
            return Isa::Avx2;
        }
    }
    return detect_avx2() ? Isa::Avx2 : Isa::Scalar;
}

struct State {
    Table scalar;
#ifdef MSP_HAVE_AVX2_BUILD
    Table avx2;
#endif
    Isa active;
    State() : scalar(make_scalar_table()) {
#ifdef MSP_HAVE_AVX2_BUILD
        avx2 = make_avx2_table();
#endif
        active = detect_isa();
    }
};

State& state() {
    static State s;
    return s;
}

}  // namespace

bool avx2_supported() { return detect_avx2(); }

Isa active_isa() { return state().active; }

void set_isa(Isa isa) {
    if (isa == Isa::Avx2 && !detect_avx2())
        throw std::runtime_error("set_isa: CPU lacks AVX2/FMA");
    state().active = isa;
}

const Table& table_for(Isa isa) {
#ifdef MSP_HAVE_AVX2_BUILD
    if (isa == Isa::Avx2) return state().avx2;
#else
    if (isa == Isa::Avx2) throw std::runtime_error("AVX2 table not built on this target");
#endif
    return state().scalar;
}

const Table& table() { return table_for(state().active); }

}  // namespace msp::kernels
