#pragma once

#include <string>
#include <vector>

#include "activity.hpp"

namespace seb {

enum class DiagCode {
    // well-formedness
    DupLink,
    UnscopedLink,
    Cycle,
    ContainmentCross,
    RepIncoming,
    RepOutgoing,
    RepEscape,
    KindClash,
    JoinLink,
    // variables and deployment
    P0Rebound,
    S0Init,
    RootSession,
    P0NotFree,
    S0NotFree,
    ExtraFreeSession,
    DomainMismatch,
    BoundDefined,
    UndefinedFree,
    // configurations
    DupLocation,
    DanglingPartner,
    ClientShape,
    // exploration notes
    UnfNonVacuous,
    PickWrapperFalse,
};

inline const char* code_name(DiagCode c) {
    switch (c) {
        case DiagCode::DupLink: return "DUP_LINK";
        case DiagCode::UnscopedLink: return "UNSCOPED_LINK";
        case DiagCode::Cycle: return "CYCLE";
        case DiagCode::ContainmentCross: return "CONTAINMENT_CROSS";
        case DiagCode::RepIncoming: return "REP_INCOMING";
        case DiagCode::RepOutgoing: return "REP_OUTGOING";
        case DiagCode::RepEscape: return "REP_ESCAPE";
        case DiagCode::KindClash: return "KIND_CLASH";
        case DiagCode::JoinLink: return "JOIN_LINK";
        case DiagCode::P0Rebound: return "P0_REBOUND";
        case DiagCode::S0Init: return "S0_INIT";
        case DiagCode::RootSession: return "ROOT_SESSION";
        case DiagCode::P0NotFree: return "P0_NOT_FREE";
        case DiagCode::S0NotFree: return "S0_NOT_FREE";
        case DiagCode::ExtraFreeSession: return "EXTRA_FREE_SESSION";
        case DiagCode::DomainMismatch: return "DOMAIN_MISMATCH";
        case DiagCode::BoundDefined: return "BOUND_DEFINED";
        case DiagCode::UndefinedFree: return "UNDEFINED_FREE";
        case DiagCode::DupLocation: return "DUP_LOCATION";
        case DiagCode::DanglingPartner: return "DANGLING_PARTNER";
        case DiagCode::ClientShape: return "CLIENT_SHAPE";
        case DiagCode::UnfNonVacuous: return "UNF_NON_VACUOUS";
        case DiagCode::PickWrapperFalse: return "PICK_WRAPPER_FALSE";
    }
    return "?";
}

struct Diagnostic {
    DiagCode code;
    std::string message;
    Path path;

    std::string to_string() const {
        std::string out = code_name(code);
        if (!path.empty()) out += " at " + path_to_string(path);
        return out + ": " + message;
    }
};

inline bool has_code(const std::vector<Diagnostic>& ds, DiagCode c) {
    for (const auto& d : ds) {
        if (d.code == c) return true;
    }
    return false;
}

}  // namespace seb
