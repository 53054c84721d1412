#pragma once

#include <stdexcept>
#include <string>

namespace orbitlin {

// Domain errors carry a stable kind name; the CLI prints it and exits 1.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

inline Error err_unknown_atom(const std::string& m) { return Error("UnknownAtom", m); }
inline Error err_forbidden(const std::string& m) { return Error("ForbiddenSubstructure", m); }
inline Error err_order(const std::string& m) { return Error("InconsistentOrder", m); }
inline Error err_not_type_preserving(const std::string& m) { return Error("NotTypePreserving", m); }
inline Error err_bad_index_set(const std::string& m) { return Error("BadIndexSet", m); }
inline Error err_zero_vector(const std::string& m) { return Error("ZeroVector", m); }
inline Error err_not_balanced(const std::string& m) { return Error("NotBalanced", m); }
inline Error err_coeff_outside(const std::string& m) { return Error("CoefficientOutsideSpace", m); }
inline Error err_class_mismatch(const std::string& m) { return Error("ClassMismatch", m); }
inline Error err_too_large(const std::string& m) { return Error("TooLarge", m); }
inline Error err_not_subbasis(const std::string& m) { return Error("NotSubbasis", m); }
inline Error err_not_isometric(const std::string& m) { return Error("NotIsometric", m); }
inline Error err_not_injective(const std::string& m) { return Error("NotInjective", m); }
inline Error err_letter(const std::string& m) { return Error("LetterNotInAlphabet", m); }
inline Error err_unsupported_world(const std::string& m) { return Error("UnsupportedWorld", m); }
inline Error err_window(const std::string& m) { return Error("WindowTooSmall", m); }
inline Error err_format(const std::string& m) { return Error("BadFile", m); }

}  // namespace orbitlin
