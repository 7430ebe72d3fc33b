#ifndef WH_ERRORS_HPP
#define WH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wh {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

#define WH_DEFINE_ERROR(Name)                                                  \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string &msg) : Error(#Name ": " + msg) {}     \
    }

WH_DEFINE_ERROR(NonDecayingInput);
WH_DEFINE_ERROR(ConvergenceFailure);
WH_DEFINE_ERROR(ZeroOnLine);
WH_DEFINE_ERROR(AmbiguousIndex);
WH_DEFINE_ERROR(BranchError);
WH_DEFINE_ERROR(WindingObstruction);
WH_DEFINE_ERROR(MismatchedJ);
WH_DEFINE_ERROR(RealAxisSingularity);
WH_DEFINE_ERROR(DegreeMismatch);
WH_DEFINE_ERROR(PoleEvaluation);
WH_DEFINE_ERROR(SpuriousRealPole);
WH_DEFINE_ERROR(GrowthUnsafe);
WH_DEFINE_ERROR(UnsupportedJ);
WH_DEFINE_ERROR(ZeroEpsilon);
WH_DEFINE_ERROR(PreconditionViolated);

#undef WH_DEFINE_ERROR

} // namespace wh

#endif
