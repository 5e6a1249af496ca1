#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pathctl {

/// Base class for every error the library raises.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

/// A function was evaluated outside its admissible domain or produced a
/// non-finite value.
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// Numerical failure: divergence, annihilated densities, failed root finding.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

/// Euler-Maruyama produced a non-finite state.
class DivergenceError : public NumericalError
{
  public:
    DivergenceError(double s, std::string state, std::size_t step = npos)
        : NumericalError(describe(s, state, step)), time(s), state_text(std::move(state)), step(step)
    {
    }

    DivergenceError with_step(std::size_t at) const { return {time, state_text, at}; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    double time;
    std::string state_text;
    std::size_t step;

  private:
    static std::string describe(double s, const std::string& state, std::size_t step)
    {
        std::string msg = "divergence at step";
        if (step != npos) {
            msg += " " + std::to_string(step);
        }
        msg += " (s = " + std::to_string(s) + ", X = " + state + ")";
        return msg;
    }
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error
{
  public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line)
    {
    }

    int line;
};

/// Filesystem failure.
class IoError : public Error
{
  public:
    using Error::Error;
};

}  // namespace pathctl
