#include "boxgap/forms.hpp"

namespace boxgap {

// double is the working precision everywhere; instantiate once here
template struct QuadraticForm<double>;
template QuadraticForm<double> operator+(const QuadraticForm<double>&, const QuadraticForm<double>&);
template QuadraticForm<double> operator-(const QuadraticForm<double>&, const QuadraticForm<double>&);
template QuadraticForm<double> operator*(double, const QuadraticForm<double>&);
template Eigen::MatrixXd to_dense(const QuadraticForm<double>&);
template void export_coo(const QuadraticForm<double>&, std::ostream&);
template QuadraticForm<double> assemble_neumann_laplacian<double>(const Grid&);
template QuadraticForm<double> assemble_subcube_laplacian_sum<double>(const SubdivisionScheme&);
template QuadraticForm<double> projector_Q<double>(const Grid&);
template QuadraticForm<double> projector_Q<double>(const SubdivisionScheme&, Eigen::Index);
template QuadraticForm<double> projector_Q_sum<double>(const SubdivisionScheme&);
template double dirichlet_energy(const GridFunction<double>&, double);

}  // namespace boxgap
