#pragma once

#include "velopir/boot/bootstrap.hpp"

namespace velopir::boot {

/// Bootstrapped binary gates on samples encrypting Ecd(m) = +-1/8. Every
/// gate except hom_not ends in one bootstrapping and returns a fresh sample.
TlweSample hom_constant(bool value, const EvaluationKeySet& evk);
TlweSample hom_not(const TlweSample& a);
TlweSample hom_and(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk);
TlweSample hom_or(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk);
TlweSample hom_nand(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk);
TlweSample hom_xor(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk);
TlweSample hom_xnor(const TlweSample& a, const TlweSample& b, const EvaluationKeySet& evk);

/// c ? a : b with two blind rotations and one key switch.
TlweSample hom_mux(const TlweSample& c, const TlweSample& a, const TlweSample& b,
                   const EvaluationKeySet& evk);
/// c ? a : b as OR(AND(c, a), AND(NOT c, b)); three bootstrappings.
TlweSample hom_mux_composed(const TlweSample& c, const TlweSample& a, const TlweSample& b,
                            const EvaluationKeySet& evk);

}  // namespace velopir::boot
