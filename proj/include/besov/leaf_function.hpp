#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "besov/grid.hpp"
#include "besov/params.hpp"

namespace besov {

/// Real function constant on each cell of one resolution level K.
///
/// `values[i]` is the value on cell (K, i).
class LeafFunction {
public:
    LeafFunction(GridPtr grid, int level, Eigen::VectorXd values);

    static LeafFunction zero(GridPtr grid, int level);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int level() const { return level_; }
    const Eigen::VectorXd& values() const { return values_; }
    double value(int index) const { return values_[index]; }

    /// Integral over each cell of level k. For k > level the function is
    /// constant on those cells, so this is value-of-ancestor times measure.
    Eigen::VectorXd level_integrals(int k) const;

    /// Mean value over each cell of level k.
    Eigen::VectorXd level_averages(int k) const;

    double integral() const;
    double cell_integral(CellId id) const;

    /// Value on an arbitrary cell at level >= K (the value of its level-K ancestor).
    double value_on(CellId id) const;

    LeafFunction operator+(const LeafFunction& other) const;
    LeafFunction operator-(const LeafFunction& other) const;
    LeafFunction operator*(double t) const;

private:
    GridPtr grid_;
    int level_;
    Eigen::VectorXd values_;
};

/// Measures of the cells of `level`, in index order.
Eigen::VectorXd level_measures(const Grid& grid, int level);

/// (sum |v|^p |Q|)^(1/p); max |v| for p = inf.
double lp_norm(const LeafFunction& f, Exponent p);
double lp_norm(const LeafFunction& f, double p);

/// Constant extension to a finer level.
LeafFunction refine(const LeafFunction& f, int level);

/// Brings two functions to a common (finer) level.
int common_level(const LeafFunction& f, const LeafFunction& g);

/// Named sampling rule.
///
///   constant(c)       value c everywhere
///   indicator(a,b)    exact average of 1_[a,b) over each cell (interval grids)
///   linear            x at the cell midpoint (interval grids)
///   power(alpha)      x^alpha at the cell midpoint (interval grids)
///   sine(omega)       sin(omega x) at the cell midpoint (interval grids)
///   random_leaf(seed) i.i.d. uniform [-1,1]
struct Generator {
    std::string name;
    std::vector<double> args;
    std::uint64_t seed = 0;

    /// Parses "name" or "name(arg,...)".
    static Generator parse(const std::string& text);
    std::string to_string() const;
};

LeafFunction sample(GridPtr grid, int level, const Generator& generator);

}  // namespace besov
