#pragma once

#include <vector>

namespace fogsim {

struct Point2D {
  double x = 0.0;  // meters
  double y = 0.0;
};

double distance(const Point2D& a, const Point2D& b);

// Static parameters of one fog node.  Node ids are 1-based everywhere in the
// public interface (state encodings, file formats, CLI output).
struct FogNode {
  int id = 0;                  // 1..N
  Point2D position;            // within the deployment area, meters
  double mu = 0.0;             // mean computing service rate, tasks per slot
  double lambda = 0.0;         // mean task arrival rate, tasks per slot
  double cpu_speed_hz = 0.0;   // CPU cycles per second
  int queue_capacity = 0;      // maximum CPU queue length, tasks
  double tx_power_dbm = 0.0;   // transmission power
};

// Wireless channel between fog nodes: free bandwidth per node, power-law
// path loss, thermal noise floor.
struct ChannelModel {
  double bandwidth_hz = 2.0e6;
  double path_loss_const = 1.0e-3;     // channel gain multiplier
  double path_loss_exp = 4.0;          // distance exponent
  double noise_psd_dbm_hz = -174.0;    // noise power spectral density

  bool operator==(const ChannelModel&) const = default;
};

// Workload shape shared by all tasks.
struct TaskProfile {
  double data_size_bits = 4.0e9;   // payload moved per offloaded task
  double instructions = 200.0e6;   // instructions per task
  double cpi = 5.0;                // CPU cycles per instruction

  double cycles_per_task() const { return instructions * cpi; }
  bool operator==(const TaskProfile&) const = default;
};

double dbm_to_watts(double dbm);

// Shannon-capacity transmission rate from src to dst in bits/second:
//   rate = B * log2(1 + g * P / (B * N0)),  g = beta1 * d^(-beta2)
// All channel math is done in linear SI units; dBm quantities are converted
// here.  Throws std::domain_error when the nodes are coincident.
double transmission_rate(const FogNode& src, const FogNode& dst,
                         const ChannelModel& channel);

// Round-trip communication time for offloading `offloaded` tasks at the
// given link rate, seconds.
double comm_time(int offloaded, double rate_bps, const TaskProfile& tasks);

// Execution time of the local and offloaded shares, seconds.
double exec_time(int local, int offloaded, const FogNode& local_node,
                 const FogNode& remote_node, const TaskProfile& tasks);

// Queue waiting time charged to a placement.  Each term is gated on its
// share being non-empty.
double wait_time(int local, int offloaded, double q_local, double q_remote,
                 double mu_local, double mu_remote);

// Validation helpers; throw std::invalid_argument naming the bad field.
void validate(const FogNode& node);
void validate(const ChannelModel& channel);
void validate(const TaskProfile& tasks);

}  // namespace fogsim
