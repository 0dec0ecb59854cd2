#include "resetkit/sdr.hpp"

namespace resetkit {

std::string_view to_string(Status st) {
  switch (st) {
    case Status::C: return "C";
    case Status::RB: return "RB";
    case Status::RF: return "RF";
  }
  return "?";
}

Status parse_status(std::string_view text) {
  if (text == "C") return Status::C;
  if (text == "RB") return Status::RB;
  if (text == "RF") return Status::RF;
  throw std::invalid_argument("unknown status '" + std::string(text) + "'");
}

}  // namespace resetkit
