#include "movcat/error.hpp"

#include <algorithm>

namespace movcat {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::BadRef: return "BadRef";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::MissingComposite: return "MissingComposite";
    case ErrorKind::IllegalComposite: return "IllegalComposite";
    case ErrorKind::IdentityLawBroken: return "IdentityLawBroken";
    case ErrorKind::AssocBroken: return "AssocBroken";
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::DomCodBroken: return "DomCodBroken";
    case ErrorKind::IdentityNotPreserved: return "IdentityNotPreserved";
    case ErrorKind::CompositionNotPreserved: return "CompositionNotPreserved";
    case ErrorKind::SourceTargetMismatch: return "SourceTargetMismatch";
    case ErrorKind::ComponentTypeError: return "ComponentTypeError";
    case ErrorKind::NaturalitySquareBroken: return "NaturalitySquareBroken";
    case ErrorKind::InvalidPoset: return "InvalidPoset";
    case ErrorKind::NotAMonoid: return "NotAMonoid";
    case ErrorKind::SizeBoundExceeded: return "SizeBoundExceeded";
    case ErrorKind::InvalidCopresheaf: return "InvalidCopresheaf";
    case ErrorKind::BondFunctorialityBroken: return "BondFunctorialityBroken";
    case ErrorKind::SystemTypeError: return "SystemTypeError";
    case ErrorKind::ConeIncompatible: return "ConeIncompatible";
    case ErrorKind::NoDesignatedCoproducts: return "NoDesignatedCoproducts";
    case ErrorKind::UniversalPropertyFails: return "UniversalPropertyFails";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedReference: return "UnresolvedReference";
    case ErrorKind::ParamsOutOfRange: return "ParamsOutOfRange";
    case ErrorKind::UnknownTheorem: return "UnknownTheorem";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string & message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

namespace {
    std::string summarize(const std::vector<Violation> & vs)
    {
        std::string out;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i == 8) {
                out += "; ... (" + std::to_string(vs.size() - i) + " more)";
                break;
            }
            if (i > 0)
                out += "; ";
            out += std::string(to_string(vs[i].kind)) + "(" + vs[i].detail + ")";
        }
        return out;
    }
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorKind::VerificationFailed : violations.front().kind, summarize(violations)),
      violations_(std::move(violations))
{
}

bool ValidationError::has(ErrorKind kind) const
{
    return std::any_of(violations_.begin(), violations_.end(), [&](const Violation & v) { return v.kind == kind; });
}

SyntaxError::SyntaxError(int line, int column, const std::string & expected, const std::string & found)
    : Error(ErrorKind::SyntaxError, std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected +
                                        ", found " + found),
      line_(line), column_(column)
{
}

ReferenceError::ReferenceError(int line, int column, const std::string & what)
    : Error(ErrorKind::UnresolvedReference,
            line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": unresolved " + what
                     : "unresolved " + what),
      line_(line), column_(column)
{
}

void ViolationList::throw_if_any()
{
    if (!items_.empty())
        throw ValidationError(std::move(items_));
}

} // namespace movcat
