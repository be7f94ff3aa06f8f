#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hardyops {

enum class error_kind {
   invalid_argument,
   vanishing_constant_term,
   duplicate_nodes,
   pole_proximity,
   invalid_order,
   depth_exceeded,
   not_finite_order,
   annihilation_fails,
   spectrum_mismatch,
   orbit_degenerate,
   precondition_violated,
   p_equals_two,
   no_family_matches,
   parse_error,
};

constexpr std::string_view to_string(error_kind kind) noexcept
{
   switch (kind) {
   case error_kind::invalid_argument: return "InvalidArgument";
   case error_kind::vanishing_constant_term: return "VanishingConstantTerm";
   case error_kind::duplicate_nodes: return "DuplicateNodes";
   case error_kind::pole_proximity: return "PoleProximity";
   case error_kind::invalid_order: return "InvalidOrder";
   case error_kind::depth_exceeded: return "DepthExceeded";
   case error_kind::not_finite_order: return "NotFiniteOrder";
   case error_kind::annihilation_fails: return "AnnihilationFails";
   case error_kind::spectrum_mismatch: return "SpectrumMismatch";
   case error_kind::orbit_degenerate: return "OrbitDegenerate";
   case error_kind::precondition_violated: return "PreconditionViolated";
   case error_kind::p_equals_two: return "PEqualsTwo";
   case error_kind::no_family_matches: return "NoFamilyMatches";
   case error_kind::parse_error: return "ParseError";
   }
   return "Unknown";
}

// Every failure raised by the library carries a machine-readable kind.
class error : public std::runtime_error {
public:
   error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what)
      , kind_(kind)
   {
   }

   error_kind kind() const noexcept { return kind_; }

private:
   error_kind kind_;
};

} // namespace hardyops
