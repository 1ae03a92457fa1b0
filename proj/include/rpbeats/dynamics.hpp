#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpbeats/half_int.hpp"
#include "rpbeats/hamiltonian.hpp"

namespace rpbeats {

// Density matrix over a qubit register (site 0 most significant).
struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  int n_sites = 0;

  void validate(double tol = 1e-12) const;
};

struct TimeSeries {
  std::vector<double> times;  // ns
  std::vector<double> values;
  std::string label;
  bool probability = false;

  std::size_t size() const { return times.size(); }
  void validate() const;
};

std::vector<double> uniform_grid(double t_start, double t_end, double step);

enum class FieldRegime { Zero, High };
enum class AverageMode { Exact, Representative };

const char* to_string(FieldRegime r);
const char* to_string(AverageMode m);

// exp(-iHt) via a one-time eigendecomposition of each connected block of H.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXcd& H);

  int dim() const { return dim_; }
  std::size_t block_count() const { return blocks_.size(); }
  Eigen::MatrixXcd unitary(double t) const;
  // Columns are psi(t) for each requested time.
  Eigen::MatrixXcd evolve_state(const Eigen::VectorXcd& psi0, const std::vector<double>& times) const;
  std::vector<Eigen::MatrixXcd> evolve(const Eigen::MatrixXcd& rho0, const std::vector<double>& times) const;

 private:
  struct Block {
    std::vector<Eigen::Index> index;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd energies;
  };
  int dim_ = 0;
  std::vector<Block> blocks_;
  std::vector<int> block_of_;
};

std::vector<DensityMatrix> evolve(const BlockHamiltonian& H, const DensityMatrix& rho0, const std::vector<double>& times);

// Reduced state of (electron 2, electron 1) in the shared register layout.
Eigen::Matrix4cd electron_reduced(const Eigen::VectorXcd& psi);
Eigen::Matrix4cd electron_reduced(const Eigen::MatrixXcd& rho);

struct ElectronTrace {
  std::vector<double> times;
  std::vector<Eigen::Matrix4cd> rho;

  static ElectronTrace zeros(const std::vector<double>& times);
  void add_scaled(const ElectronTrace& other, double w);
};

ElectronTrace electron_trace(const Propagator& prop, const Eigen::VectorXcd& psi0, const std::vector<double>& times);
// Uniform mixture over the listed nuclear basis states, electrons in the singlet.
ElectronTrace electron_trace_mixed(const Propagator& prop, int nuclear_dim, const std::vector<int>& nuclear_states,
                                   const std::vector<double>& times, int threads = 1);

double singlet_probability(const DensityMatrix& rho, int site_a, int site_b);
double singlet_probability(const Eigen::Matrix4cd& rho_e);
// Values slightly below 0 or above 1 are clamped; larger excursions throw.
double clamp_probability(double p);
std::size_t clamp_warning_count();
TimeSeries singlet_series(const ElectronTrace& trace, const std::string& label);

Eigen::VectorXcd initial_sector_vector(int index, int nuclear_dim);
DensityMatrix initial_sector_state(int index, int nuclear_dim);
DensityMatrix maximally_mixed_nuclear_state(int n_nuclear_dims);

// Nuclear-state weights for averaging over |I,I> representatives: keyed by I
// (zero field) or |m| (high field); they sum to 2^n.
std::map<HalfInt, long long> one_group_weights(int n_nuclei, FieldRegime regime);
TimeSeries weighted_average_one_group(const std::map<HalfInt, TimeSeries>& traces, FieldRegime regime,
                                      int n_nuclei = 8);

struct SectorPadding {
  int padded = 0;
  int nuclear_dim = 1;
};
TimeSeries reassemble_two_group(const std::map<HalfInt, TimeSeries>& traces,
                                const std::map<HalfInt, SectorPadding>& padding, int group2_count = 12,
                                int group1_count = 2);

// Noiseless electron state for the maximally mixed nuclear ensemble.
ElectronTrace mixed_electron_trace(const SpinSystemSpec& spec, const std::vector<double>& times, AverageMode mode,
                                   FieldRegime regime, int threads = 1);

}  // namespace rpbeats
