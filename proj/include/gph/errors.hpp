#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gph {

// Base of every failure raised by the library. The CLI maps ConfigError to
// exit code 1 and everything else to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error { using Error::Error; };

struct NonHermitianInput : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct AmbiguousBranch : Error { using Error::Error; };
struct DegenerateSpectrum : Error { using Error::Error; };
struct RankMismatch : Error { using Error::Error; };
struct StepSizeUnderflow : Error { using Error::Error; };

struct OrthogonalStates : Error {
    OrthogonalStates(const std::string& what, std::size_t link_index)
        : Error(what), link(link_index) {}
    std::size_t link;
};
struct OrthogonalEndpoints : Error { using Error::Error; };
struct CoarsePath : Error { using Error::Error; };
struct EmptyEnsemble : Error { using Error::Error; };

struct BlockViolation : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InvalidPolarization : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct NoDecay : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct SingularPath : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

}  // namespace gph
