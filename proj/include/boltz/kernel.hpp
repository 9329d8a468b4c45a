#pragma once

namespace boltz {

// B(|g|) = C |g|^gamma, isotropic in the deflection angle.
struct VHSKernel {
    double gamma = 0.0;
    double C = 0.0;
};

// Pseudo-Maxwell molecules in 2D with the normalization of the BKW solution.
VHSKernel maxwell_2d();
// Hard spheres in 3D, C = 1/(4 pi).
VHSKernel hard_spheres_3d();

void validate_kernel(const VHSKernel& k);

// Constant kernel of the Carleman form; requires gamma = d - 2.
// Throws std::invalid_argument when the kernel does not decouple.
double carleman_constant(int d, const VHSKernel& k);

// sin(x)/x with a Taylor branch for |x| < 1e-4.
double sinc(double x);

// int_{-R}^{R} e^{i rho s} d rho
double phi2(double R, double s);
// int_{-R}^{R} |rho| e^{i rho s} d rho
double phi3(double R, double s);
// int_0^pi phi3(R, s cos(theta)) d theta, periodic trapezoid rule in theta.
double psi3(double R, double s);

// int_{S^{d-1}} e^{i a omega.n} d omega (real), by angular quadrature.
double sphere_fourier(int d, double a);

}  // namespace boltz
