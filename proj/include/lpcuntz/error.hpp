#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpcuntz
{

// Base for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class KindMismatch : public Error
{
  public:
    using Error::Error;
};

class SpaceMismatch : public Error
{
  public:
    using Error::Error;
};

class InvalidArgument : public Error
{
  public:
    using Error::Error;
};

// Parse failure; position is a byte offset into the input text.
class ParseError : public Error
{
  public:
    ParseError(std::string const& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)),
          position_(position)
    {
    }

    std::size_t position() const { return position_; }

  private:
    std::size_t position_;
};

}  // namespace lpcuntz
