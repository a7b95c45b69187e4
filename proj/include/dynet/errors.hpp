#pragma once

#include <stdexcept>
#include <string>

namespace dynet {

// Exit-code classes used by the CLI (see tools/dynet.cpp):
//   2 invalid configuration, 3 numeric non-convergence, 4 too many restarts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 1; }
};

struct InvalidConfig : Error {
    using Error::Error;
    int exit_code() const override { return 2; }
};

struct InfiniteMoment : InvalidConfig {
    explicit InfiniteMoment(const std::string& what_moment)
        : InvalidConfig("required moment is infinite: " + what_moment) {}
};

struct NonConvergence : Error {
    using Error::Error;
    int exit_code() const override { return 3; }
};

struct RootNotFound : NonConvergence {
    using NonConvergence::NonConvergence;
};

struct MaxIterations : NonConvergence {
    using NonConvergence::NonConvergence;
};

struct TooManyRestarts : Error {
    explicit TooManyRestarts(unsigned long long attempts)
        : Error("population went extinct in " + std::to_string(attempts) +
                " consecutive attempts; survival appears too rare"),
          attempts(attempts) {}
    unsigned long long attempts;
    int exit_code() const override { return 4; }
};

struct Extinct : Error {
    Extinct() : Error("population is extinct; no event can occur") {}
};

struct TooFewEdges : Error {
    using Error::Error;
};

}  // namespace dynet
