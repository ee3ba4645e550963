// Named resource states and the nine four-qubit SLOCC families, plus the
// textual state literal accepted by the command line.
#pragma once

#include "chsh/state_vector.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chsh {

/// EPR, GHZ(n), W(n), and the critical four-qubit states MP, C1 and L.
/// L uses omega = exp(2 pi i / 3).
StateVector epr_state();
StateVector ghz_state(int qubits);
StateVector w_state(int qubits);
StateVector mp_state();
StateVector cluster_state();
StateVector l_state();

/// Accepts "epr", "ghz<n>", "w<n>", "zero<n>", "mp", "c1", "l".
/// Throws std::invalid_argument for anything else.
StateVector make_named_state(std::string_view name);

enum class FamilyId {
  G_abcd,
  L_abc2,
  L_a2b2,
  L_ab3,
  L_a4,
  L_a2_0_3p1,
  L_0_7p1,
  L_0_5p3,
  L_0_3p1_0_3p1,
};

inline constexpr FamilyId kAllFamilies[] = {
    FamilyId::G_abcd,  FamilyId::L_abc2,     FamilyId::L_a2b2,  FamilyId::L_ab3,         FamilyId::L_a4,
    FamilyId::L_a2_0_3p1, FamilyId::L_0_7p1, FamilyId::L_0_5p3, FamilyId::L_0_3p1_0_3p1,
};

std::string family_name(FamilyId id);
/// Case-insensitive; throws std::invalid_argument on unknown names.
FamilyId parse_family(std::string_view name);

/// Parameter names in order, e.g. {"a","b","c"} for L_abc2; empty for the
/// three parameter-free families.
std::vector<std::string> family_parameter_names(FamilyId id);
bool family_is_parametric(FamilyId id);

/// Complex parameters in the order of family_parameter_names.
struct FamilyParams {
  std::vector<Complex> values;
};

/// Normal form of the family, normalized. Throws std::invalid_argument on a
/// parameter count mismatch or a zero vector.
StateVector make_family_state(FamilyId id, const FamilyParams& params);

/// Moduli uniform in [0.2, 2.0], phases uniform in [0, 2 pi), reproducible
/// from `seed`. Throws std::invalid_argument for parameter-free families.
FamilyParams random_family_params(FamilyId id, std::uint64_t seed);

/// "1", "-0.5", "2i", "1+0i", "0.5-2.25i", "-i".
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

/// Resolved state literal with a printable descriptor.
struct StateSpec {
  std::string descriptor;
  StateVector state;
  std::optional<FamilyId> family;
};

/// One of
///   - a named state (see make_named_state),
///   - a family spec "l_abc2:a=1,b=-2.5,c=0" or "g_abcd:random=7",
///   - a JSON array of [re, im] amplitude pairs in big-endian index order.
StateSpec parse_state_literal(std::string_view text);

} // namespace chsh
