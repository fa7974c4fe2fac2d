#pragma once

#include <stdexcept>
#include <string>

namespace galwild {

// Machine-readable failure codes. Names are stable: they appear verbatim in
// CLI error JSON and are matched by tests.
enum class errc {
    not_prime,
    size_bound_exceeded,
    field_mismatch,
    division_by_zero,
    no_such_root,
    no_embedding,
    not_ut_star_class,
    unipotent_input,
    eigenvalue_outside_sweep,
    cap_exceeded,
    singular_generator,
    not_ut_star,
    not_normal_sylow,
    not_recognized,
    not_p_power,
    root_outside_sweep,
    not_commuting,
    not_unipotent,
    size_mismatch,
    degenerate_cone,
    zero_form,
    search_space_exceeded,
    divisibility_fail,
    conditions_fail,
    irreducible_search_fail,
    wild_degree,
    not_invariant,
    division_fails,
    wrong_characteristic,
    parameter_violation,
    hyperplane_inside_x,
    unsupported_dimension,
    syntax_error,
    not_homogeneous,
    unknown_variable,
    identity_element,
    bad_input,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::size_bound_exceeded: return "SizeBoundExceeded";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::no_such_root: return "NoSuchRoot";
        case errc::no_embedding: return "NoEmbedding";
        case errc::not_ut_star_class: return "NotUTStarClass";
        case errc::unipotent_input: return "UnipotentInput";
        case errc::eigenvalue_outside_sweep: return "EigenvalueOutsideSweep";
        case errc::cap_exceeded: return "CapExceeded";
        case errc::singular_generator: return "SingularGenerator";
        case errc::not_ut_star: return "NotUTStar";
        case errc::not_normal_sylow: return "NotNormalSylow";
        case errc::not_recognized: return "NotRecognized";
        case errc::not_p_power: return "NotPPower";
        case errc::root_outside_sweep: return "RootOutsideSweep";
        case errc::not_commuting: return "NotCommuting";
        case errc::not_unipotent: return "NotUnipotent";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::degenerate_cone: return "DegenerateCone";
        case errc::zero_form: return "ZeroForm";
        case errc::search_space_exceeded: return "SearchSpaceExceeded";
        case errc::divisibility_fail: return "DivisibilityFail";
        case errc::conditions_fail: return "ConditionsFail";
        case errc::irreducible_search_fail: return "IrreducibleSearchFail";
        case errc::wild_degree: return "WildDegree";
        case errc::not_invariant: return "NotInvariant";
        case errc::division_fails: return "DivisionFails";
        case errc::wrong_characteristic: return "WrongCharacteristic";
        case errc::parameter_violation: return "ParameterViolation";
        case errc::hyperplane_inside_x: return "HyperplaneInsideX";
        case errc::unsupported_dimension: return "UnsupportedDimension";
        case errc::syntax_error: return "SyntaxError";
        case errc::not_homogeneous: return "NotHomogeneous";
        case errc::unknown_variable: return "UnknownVariable";
        case errc::identity_element: return "Identity";
        case errc::bad_input: return "BadInput";
    }
    return "UnknownError";
}

// Codes of the cap/sweep-exhaustion family map to CLI exit code 3,
// everything else to exit code 2.
inline bool errc_is_exhaustion(errc c) {
    switch (c) {
        case errc::size_bound_exceeded:
        case errc::cap_exceeded:
        case errc::search_space_exceeded:
        case errc::root_outside_sweep:
        case errc::eigenvalue_outside_sweep:
            return true;
        default:
            return false;
    }
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace galwild
