#pragma once

#include <stdexcept>
#include <string>

namespace csergo {

// Exit-code families used by the CLI:
//   2 parse/shape, 3 semantic validation, 4 irreducibility, 5 numeric failure.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct IrreducibilityError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// -- validation family -------------------------------------------------------

// Shape-level defects of the model document (bad relation, undeclared names);
// the CLI reports these with the parse/shape exit code.
struct ShapeError : ValidationError {
    using ValidationError::ValidationError;
};

struct ReflexivePair : ShapeError {
    explicit ReflexivePair(const std::string& letter)
        : ShapeError("ReflexivePair: independence pair (" + letter + "," + letter + ")"),
          letter(letter) {}
    std::string letter;
};

struct UnknownLetter : ShapeError {
    explicit UnknownLetter(const std::string& letter)
        : ShapeError("UnknownLetter: " + letter), letter(letter) {}
    std::string letter;
};

struct UnknownState : ShapeError {
    explicit UnknownState(const std::string& state)
        : ShapeError("UnknownState: " + state), state(state) {}
    std::string state;
};

struct CommutationViolation : ValidationError {
    CommutationViolation(const std::string& state, const std::string& a, const std::string& b)
        : ValidationError("CommutationViolation: state " + state + ", letters (" + a + "," + b + ")"),
          state(state), a(a), b(b) {}
    std::string state, a, b;
};

struct WeightSupportMismatch : ValidationError {
    WeightSupportMismatch(const std::string& state, const std::string& letter)
        : ValidationError("WeightSupportMismatch: (" + state + "," + letter + ")"),
          state(state), letter(letter) {}
    std::string state, letter;
};

struct NonPositiveWeight : ValidationError {
    explicit NonPositiveWeight(const std::string& where)
        : ValidationError("NonPositiveWeight: " + where) {}
};

struct NotADivisor : ValidationError {
    NotADivisor() : ValidationError("NotADivisor: left quotient does not exist") {}
};

struct UnknownPreset : ValidationError {
    explicit UnknownPreset(const std::string& name)
        : ValidationError("UnknownPreset: " + name) {}
};

// -- numeric family -----------------------------------------------------------

struct NoRootInUnitInterval : NumericError {
    NoRootInUnitInterval() : NumericError("NoRootInUnitInterval") {}
};

struct NoPositiveRoot : NumericError {
    NoPositiveRoot() : NumericError("NoPositiveRoot: characteristic polynomial has no root in scan range") {}
};

struct SingularAtS : NumericError {
    explicit SingularAtS(double s)
        : NumericError("SingularAtS: Mobius matrix singular at s=" + std::to_string(s)), s(s) {}
    double s;
};

struct KernelDimensionNot1 : NumericError {
    explicit KernelDimensionNot1(int rank)
        : NumericError("KernelDimensionNot1: numerical rank " + std::to_string(rank)), rank(rank) {}
    int rank;
};

struct NonPositiveKernel : NumericError {
    NonPositiveKernel() : NumericError("NonPositiveKernel: kernel vector has mixed signs") {}
};

struct GapViolation : NumericError {
    explicit GapViolation(const std::string& letter)
        : NumericError("GapViolation: restricted root not above characteristic root for letter " + letter),
          letter(letter) {}
    std::string letter;
};

struct StructuralInconsistency : NumericError {
    explicit StructuralInconsistency(const std::string& what)
        : NumericError("StructuralInconsistency: " + what) {}
};

struct UmbrellaViolation : NumericError {
    explicit UmbrellaViolation(const std::string& what)
        : NumericError("UmbrellaViolation: " + what) {}
};

struct NotStochastic : NumericError {
    NotStochastic() : NumericError("NotStochastic: row sums differ from 1") {}
};

struct NotStronglyConnected : NumericError {
    NotStronglyConnected() : NumericError("NotStronglyConnected") {}
};

struct DeadRow : NumericError {
    explicit DeadRow(const std::string& vertex)
        : NumericError("DeadRow: simulation reached unreachable kernel row " + vertex) {}
};

struct IncompatibleAdditive : ValidationError {
    explicit IncompatibleAdditive(const std::string& where)
        : ValidationError("IncompatibleAdditive: " + where) {}
};

struct LetterNeverHit : Error {
    explicit LetterNeverHit(const std::string& letter)
        : Error("LetterNeverHit: " + letter), letter(letter) {}
    std::string letter;
};

// enumeration guards
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error("BudgetExceeded: " + what) {}
};

}  // namespace csergo
