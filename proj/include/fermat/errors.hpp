#pragma once

#include <stdexcept>
#include <string>

namespace fermat {

// Base class for all library failures. Subclasses name the condition so
// callers (and the CLI exit-code mapping) can discriminate without parsing
// messages.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FERMAT_DEFINE_ERROR(NAME)                                         \
    struct NAME : Error {                                                  \
        explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {} \
    }

FERMAT_DEFINE_ERROR(OutOfDomain);
FERMAT_DEFINE_ERROR(NonfiniteDensity);
FERMAT_DEFINE_ERROR(DisconnectedGraph);
FERMAT_DEFINE_ERROR(SizeCapExceeded);
FERMAT_DEFINE_ERROR(DoubleNormalization);
FERMAT_DEFINE_ERROR(LeftDomain);
FERMAT_DEFINE_ERROR(GridTooCoarse);
FERMAT_DEFINE_ERROR(NegativeArgument);
FERMAT_DEFINE_ERROR(EmptyGraph);
FERMAT_DEFINE_ERROR(ZeroDegree);
FERMAT_DEFINE_ERROR(EmptySide);
FERMAT_DEFINE_ERROR(EpsOutOfRange);
FERMAT_DEFINE_ERROR(NotConverged);
FERMAT_DEFINE_ERROR(Disconnected);
FERMAT_DEFINE_ERROR(HypothesisViolated);
FERMAT_DEFINE_ERROR(UnstableStep);
FERMAT_DEFINE_ERROR(EmptyCluster);
FERMAT_DEFINE_ERROR(TooManyClusters);
FERMAT_DEFINE_ERROR(EmptyProcess);
FERMAT_DEFINE_ERROR(ConfigError);

#undef FERMAT_DEFINE_ERROR

}  // namespace fermat
