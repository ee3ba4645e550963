#include "chsh/state_library.hpp"

#include "chsh/seeding.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chsh {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Amplitudes from (basis string, coefficient) terms, e.g. {"0110", 1.0}.
std::vector<Complex> four_qubit(std::initializer_list<std::pair<const char*, Complex>> terms) {
  std::vector<Complex> amps(16);
  for (const auto& [ket, coeff] : terms) {
    std::uint32_t idx = 0;
    for (const char* p = ket; *p; ++p) idx = (idx << 1) | (*p == '1' ? 1u : 0u);
    amps[idx] += coeff;
  }
  return amps;
}

int qubit_suffix(std::string_view name, std::string_view prefix) {
  const auto digits = name.substr(prefix.size());
  int n = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size()) {
    throw std::invalid_argument("unknown state '" + std::string(name) + "'");
  }
  return n;
}

double parse_double(std::string_view s, std::string_view context) {
  const std::string buf(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(buf, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (buf.empty() || used != buf.size()) {
    throw std::invalid_argument("bad number '" + buf + "' in '" + std::string(context) + "'");
  }
  return v;
}

} // namespace

StateVector epr_state() { return ghz_state(2); }

StateVector ghz_state(int qubits) {
  if (qubits < 2 || qubits > 16) throw std::invalid_argument("GHZ state needs 2..16 qubits");
  std::vector<Complex> amps(std::size_t{1} << qubits);
  amps.front() = 1.0;
  amps.back() = 1.0;
  return StateVector(std::move(amps));
}

StateVector w_state(int qubits) {
  if (qubits < 2 || qubits > 16) throw std::invalid_argument("W state needs 2..16 qubits");
  std::vector<Complex> amps(std::size_t{1} << qubits);
  for (int i = 0; i < qubits; ++i) amps[std::size_t{1} << i] = 1.0;
  return StateVector(std::move(amps));
}

StateVector mp_state() { return StateVector(four_qubit({{"0000", 1.0}, {"0011", 1.0}, {"1100", 1.0}, {"1111", 1.0}})); }

StateVector cluster_state() {
  return StateVector(four_qubit({{"0000", 1.0}, {"0011", 1.0}, {"1100", 1.0}, {"1111", -1.0}}));
}

StateVector l_state() {
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  const Complex plus = 1.0 + omega;
  const Complex minus = 1.0 - omega;
  const Complex sq = omega * omega;
  // The 1/4 prefactor of the usual presentation leaves norm^2 = 3/4; the
  // constructor normalizes.
  return StateVector(four_qubit({{"0000", plus},
                                 {"1111", plus},
                                 {"0011", minus},
                                 {"1100", minus},
                                 {"0110", sq},
                                 {"1001", sq},
                                 {"1010", sq},
                                 {"0101", sq}}));
}

StateVector make_named_state(std::string_view raw) {
  const std::string name = lower(trim(raw));
  if (name == "epr") return epr_state();
  if (name == "mp") return mp_state();
  if (name == "c1") return cluster_state();
  if (name == "l") return l_state();
  if (name.starts_with("ghz")) return ghz_state(qubit_suffix(name, "ghz"));
  if (name.starts_with("zero")) return StateVector::basis(qubit_suffix(name, "zero"), 0);
  if (name.starts_with("w")) return w_state(qubit_suffix(name, "w"));
  throw std::invalid_argument("unknown state '" + std::string(raw) + "'");
}

std::string family_name(FamilyId id) {
  switch (id) {
  case FamilyId::G_abcd: return "G_abcd";
  case FamilyId::L_abc2: return "L_abc2";
  case FamilyId::L_a2b2: return "L_a2b2";
  case FamilyId::L_ab3: return "L_ab3";
  case FamilyId::L_a4: return "L_a4";
  case FamilyId::L_a2_0_3p1: return "L_a2_0_3p1";
  case FamilyId::L_0_7p1: return "L_0_7p1";
  case FamilyId::L_0_5p3: return "L_0_5p3";
  case FamilyId::L_0_3p1_0_3p1: return "L_0_3p1_0_3p1";
  }
  return "?";
}

FamilyId parse_family(std::string_view name) {
  const std::string key = lower(trim(name));
  for (FamilyId id : kAllFamilies) {
    if (lower(family_name(id)) == key) return id;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::vector<std::string> family_parameter_names(FamilyId id) {
  switch (id) {
  case FamilyId::G_abcd: return {"a", "b", "c", "d"};
  case FamilyId::L_abc2: return {"a", "b", "c"};
  case FamilyId::L_a2b2: return {"a", "b"};
  case FamilyId::L_ab3: return {"a", "b"};
  case FamilyId::L_a4: return {"a"};
  case FamilyId::L_a2_0_3p1: return {"a"};
  default: return {};
  }
}

bool family_is_parametric(FamilyId id) { return !family_parameter_names(id).empty(); }

StateVector make_family_state(FamilyId id, const FamilyParams& params) {
  const auto names = family_parameter_names(id);
  if (params.values.size() != names.size()) {
    throw std::invalid_argument(family_name(id) + " takes " + std::to_string(names.size()) + " parameters, got " +
                                std::to_string(params.values.size()));
  }
  auto p = [&](std::size_t i) { return params.values[i]; };
  std::vector<Complex> amps;
  switch (id) {
  case FamilyId::G_abcd: {
    const Complex a = p(0), b = p(1), c = p(2), d = p(3);
    amps = four_qubit({{"0000", (a + d) / 2.0},
                       {"1111", (a + d) / 2.0},
                       {"0011", (a - d) / 2.0},
                       {"1100", (a - d) / 2.0},
                       {"0101", (b + c) / 2.0},
                       {"1010", (b + c) / 2.0},
                       {"0110", (b - c) / 2.0},
                       {"1001", (b - c) / 2.0}});
    break;
  }
  case FamilyId::L_abc2: {
    const Complex a = p(0), b = p(1), c = p(2);
    amps = four_qubit({{"0000", (a + b) / 2.0},
                       {"1111", (a + b) / 2.0},
                       {"0011", (a - b) / 2.0},
                       {"1100", (a - b) / 2.0},
                       {"1010", c},
                       {"0101", c},
                       {"0110", 1.0}});
    break;
  }
  case FamilyId::L_a2b2: {
    const Complex a = p(0), b = p(1);
    amps = four_qubit({{"0000", a}, {"1111", a}, {"0101", b}, {"1010", b}, {"0110", 1.0}, {"0011", 1.0}});
    break;
  }
  case FamilyId::L_ab3: {
    const Complex a = p(0), b = p(1);
    const Complex t = kI / std::sqrt(2.0);
    amps = four_qubit({{"0000", a},
                       {"1111", a},
                       {"0101", (a + b) / 2.0},
                       {"1010", (a + b) / 2.0},
                       {"0110", (a - b) / 2.0},
                       {"1001", (a - b) / 2.0},
                       {"0001", t},
                       {"0010", t},
                       {"1110", -t},
                       {"1101", -t}});
    break;
  }
  case FamilyId::L_a4: {
    const Complex a = p(0);
    amps = four_qubit({{"0000", a}, {"0101", a}, {"1010", a}, {"1111", a}, {"0001", kI}, {"0110", 1.0}, {"1011", -kI}});
    break;
  }
  case FamilyId::L_a2_0_3p1: {
    const Complex a = p(0);
    amps = four_qubit({{"0000", a}, {"1111", a}, {"0011", 1.0}, {"0101", 1.0}, {"0110", 1.0}});
    break;
  }
  case FamilyId::L_0_7p1:
    amps = four_qubit({{"0000", 1.0}, {"1011", 1.0}, {"1101", 1.0}, {"1110", 1.0}});
    break;
  case FamilyId::L_0_5p3:
    amps = four_qubit({{"0000", 1.0}, {"0101", 1.0}, {"1000", 1.0}, {"1110", 1.0}});
    break;
  case FamilyId::L_0_3p1_0_3p1:
    amps = four_qubit({{"0000", 1.0}, {"0111", 1.0}});
    break;
  }
  try {
    return StateVector(std::move(amps));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(family_name(id) + " parameters give the zero vector");
  }
}

FamilyParams random_family_params(FamilyId id, std::uint64_t seed) {
  const auto names = family_parameter_names(id);
  if (names.empty()) {
    throw std::invalid_argument(family_name(id) + " has no parameters to sample");
  }
  Rng rng(derive_seed(seed, {0xfa111e5ull, static_cast<std::uint64_t>(id)}));
  FamilyParams out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double modulus = rng.uniform(0.2, 2.0);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.values.push_back(std::polar(modulus, phase));
  }
  return out;
}

Complex parse_complex(std::string_view raw) {
  std::string s;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s, raw), 0.0};

  s.pop_back();
  // Split at the last sign that is not the leading one or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  const double re = re_part.empty() ? 0.0 : parse_double(re_part, raw);
  return {re, parse_double(im_part, raw)};
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

StateSpec parse_state_literal(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw std::invalid_argument("empty state literal");

  if (text.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("bad amplitude list: ") + e.what());
    }
    if (!j.is_array()) throw std::invalid_argument("amplitude list must be a JSON array");
    std::vector<Complex> amps;
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
        throw std::invalid_argument("amplitudes must be [re, im] pairs");
      }
      amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
    }
    StateVector psi(std::move(amps));
    return {"amplitudes:" + std::to_string(psi.qubits()) + "q", std::move(psi), std::nullopt};
  }

  const auto colon = text.find(':');
  const std::string head = lower(text.substr(0, colon));
  bool is_family = colon != std::string::npos;
  FamilyId id{};
  if (!is_family) {
    try {
      id = parse_family(head);
      is_family = true;
    } catch (const std::invalid_argument&) {
    }
  } else {
    id = parse_family(head);
  }

  if (!is_family) {
    StateVector psi = make_named_state(head);
    return {head, std::move(psi), std::nullopt};
  }

  const auto names = family_parameter_names(id);
  FamilyParams params;
  params.values.assign(names.size(), Complex{});
  std::vector<bool> given(names.size(), false);
  std::string descriptor = family_name(id);
  if (colon != std::string::npos) {
    std::stringstream items(text.substr(colon + 1));
    std::string item;
    std::vector<std::string> parts;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (!item.empty()) parts.push_back(item);
    }
    for (const auto& part : parts) {
      const auto eq = part.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("family parameter '" + part + "' needs name=value");
      const std::string key = lower(trim(part.substr(0, eq)));
      const std::string value = trim(part.substr(eq + 1));
      if (key == "random") {
        const auto seed = static_cast<std::uint64_t>(parse_double(value, part));
        params = random_family_params(id, seed);
        std::fill(given.begin(), given.end(), true);
        continue;
      }
      const auto it = std::find(names.begin(), names.end(), key);
      if (it == names.end()) {
        throw std::invalid_argument(family_name(id) + " has no parameter '" + key + "'");
      }
      const auto k = static_cast<std::size_t>(it - names.begin());
      params.values[k] = parse_complex(value);
      given[k] = true;
    }
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (!given[k]) throw std::invalid_argument(family_name(id) + " is missing parameter '" + names[k] + "'");
  }
  for (std::size_t k = 0; k < names.size(); ++k) {
    descriptor += (k == 0 ? ":" : ",") + names[k] + "=" + format_complex(params.values[k]);
  }
  StateVector psi = make_family_state(id, params);
  return {descriptor, std::move(psi), id};
}

} // namespace chsh
