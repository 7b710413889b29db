#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperrelax {

class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic grid on [left, right). The right endpoint is the periodic
/// image of node 0 and is not stored.
class Grid {
 public:
  Grid(double left, double right, std::size_t n);

  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }
  std::size_t size() const { return n_; }
  double h() const { return h_; }
  std::span<const double> nodes() const { return *nodes_; }
  double node(std::size_t i) const { return (*nodes_)[i]; }

  /// Map x to its periodic image in [left, right).
  double wrap(double x) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.left_ == b.left_ && a.right_ == b.right_;
  }

 private:
  double left_;
  double right_;
  std::size_t n_;
  double h_;
  std::shared_ptr<const std::vector<double>> nodes_;
};

Grid make_grid(double left, double right, std::size_t n);

/// Grid function. Copies share the grid's node storage.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  template <class F>
  static Field sample(const Grid& g, F&& f) {
    Field out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.values[i] = f(g.node(i));
    return out;
  }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

/// Ordered collection of fields on one grid; component 0 is the principal
/// variable.
class State {
 public:
  State(const Grid& g, std::size_t components);
  explicit State(std::vector<Field> fields);

  const Grid& grid() const { return grid_; }
  std::size_t components() const { return fields_.size(); }
  Field& operator[](std::size_t j) { return fields_[j]; }
  const Field& operator[](std::size_t j) const { return fields_[j]; }
  auto begin() { return fields_.begin(); }
  auto end() { return fields_.end(); }
  auto begin() const { return fields_.begin(); }
  auto end() const { return fields_.end(); }

  /// this += a * x
  State& axpy(double a, const State& x);
  State& operator*=(double a);
  void set_zero();
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<Field> fields_;
};

State operator-(State a, const State& b);
State operator+(State a, const State& b);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

// Reductions use pairwise summation (blocks of 16 summed left to right, then
// combined as a balanced binary tree); the order is a function of n only.
double pairwise_sum(std::span<const double> v);

double l2_inner(const Field& f, const Field& g);
double l2_norm(const Field& f);
double mass(const Field& f);
double max_abs(const Field& f);

/// Weighted inner product sum_j w_j <a_j, b_j>.
double weighted_inner(const State& a, const State& b, std::span<const double> weights);

/// CSV with columns x,value at 17 significant digits.
void write_field_csv(std::ostream& os, const Field& f, const std::string& name = "value");

}  // namespace hyperrelax
