#include "bohm/hilbert.hpp"

namespace bohm {

Axis parse_axis(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw std::invalid_argument("unknown axis '" + name + "' (expected x, y or z)");
}

std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::x: return "x";
    case Axis::y: return "y";
    case Axis::z: return "z";
  }
  return "?";
}

Vector3 unit_vector(Axis axis) {
  switch (axis) {
    case Axis::x: return Vector3::UnitX();
    case Axis::y: return Vector3::UnitY();
    case Axis::z: return Vector3::UnitZ();
  }
  return Vector3::Zero();
}

}  // namespace bohm
