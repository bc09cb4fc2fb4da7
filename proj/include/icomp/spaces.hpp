#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icomp/numeric.hpp"

namespace icomp {

class Space {
 public:
  enum Kind { UnitInterval, CantorCube, FiniteProduct };

  static Space unitInterval();
  static Space cantorCube();
  static Space product(std::vector<Space> factors);

  Kind kind() const { return kind_; }
  const std::vector<Space>& factors() const { return factors_; }
  bool firstCountable() const { return true; }
  bool metricAvailable() const;
  std::string toString() const;
  bool operator==(const Space&) const = default;

 private:
  Kind kind_ = UnitInterval;
  std::vector<Space> factors_;
};

// Point of {0,1}^ω, coordinates numbered from 1. Either eventually constant
// (explicit prefix then a constant tail) or given lazily by a bit function.
class CubePoint {
 public:
  static CubePoint ones();
  static CubePoint zeros();
  static CubePoint eventually(std::vector<bool> prefix, bool tail);
  static CubePoint lazy(std::function<bool(std::uint64_t)> bit, std::string label);

  bool bit(std::uint64_t coord) const;
  bool symbolic() const { return !lazy_; }
  const std::vector<bool>& prefix() const { return prefix_; }
  bool tailBit() const { return tail_; }
  std::string toString() const;

 private:
  void trim();
  std::vector<bool> prefix_;
  bool tail_ = false;
  std::function<bool(std::uint64_t)> lazy_;
  std::string label_;
};

// nullopt when equality cannot be decided from the representations.
std::optional<bool> sameCubePoint(const CubePoint& a, const CubePoint& b);

struct Point {
  enum Kind { Real, Cube, Tuple } kind = Real;
  Rational value;
  CubePoint cube;
  std::vector<Point> parts;

  static Point rat(Rational q);
  static Point of(CubePoint c);
  static Point tuple(std::vector<Point> ps);
  std::string toString() const;
};

std::optional<bool> samePoint(const Point& a, const Point& b);

struct Nbhd {
  enum Kind { Ball, Cylinder, Box } kind = Ball;
  Rational center;
  Rational radius;
  std::map<std::uint64_t, bool> constraints;
  std::vector<Nbhd> parts;

  static Nbhd ball(Rational center, Rational radius);
  static Nbhd cylinder(std::map<std::uint64_t, bool> constraints);
  static Nbhd box(std::vector<Nbhd> parts);
  std::string toString() const;
};

void checkPoint(const Space& sp, const Point& p);
void checkNbhd(const Space& sp, const Nbhd& U);

bool inNbhd(const Space& sp, const Point& p, const Nbhd& U);
// Decreasing basis at p: balls of radius 2^-k, cylinders of depth k, boxes of these.
std::vector<Nbhd> basisFamily(const Space& sp, const Point& p, std::uint64_t depth);
std::vector<Point> epsNet(const Space& sp, const Rational& eps);

Point parsePoint(std::string_view text);
Nbhd parseNbhd(std::string_view text);

}  // namespace icomp
