#include "fogsim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fogsim {

double distance(const Point2D& a, const Point2D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double transmission_rate(const FogNode& src, const FogNode& dst,
                         const ChannelModel& channel) {
  if (src.id == dst.id)
    throw std::domain_error("transmission_rate: src and dst are the same node");
  const double d = distance(src.position, dst.position);
  if (d <= 0.0)
    throw std::domain_error("transmission_rate: coincident nodes (zero distance)");
  const double gain = channel.path_loss_const * std::pow(d, -channel.path_loss_exp);
  const double tx_watts = dbm_to_watts(src.tx_power_dbm);
  const double noise_watts =
      channel.bandwidth_hz * dbm_to_watts(channel.noise_psd_dbm_hz);
  const double snr = gain * tx_watts / noise_watts;
  return channel.bandwidth_hz * std::log2(1.0 + snr);
}

double comm_time(int offloaded, double rate_bps, const TaskProfile& tasks) {
  if (offloaded < 0) throw std::invalid_argument("comm_time: negative task count");
  if (offloaded == 0) return 0.0;
  if (rate_bps <= 0.0) throw std::invalid_argument("comm_time: rate must be positive");
  return 2.0 * tasks.data_size_bits * static_cast<double>(offloaded) / rate_bps;
}

double exec_time(int local, int offloaded, const FogNode& local_node,
                 const FogNode& remote_node, const TaskProfile& tasks) {
  if (local < 0 || offloaded < 0)
    throw std::invalid_argument("exec_time: negative task count");
  double t = 0.0;
  if (local > 0)
    t += tasks.cycles_per_task() * static_cast<double>(local) / local_node.cpu_speed_hz;
  if (offloaded > 0)
    t += tasks.cycles_per_task() * static_cast<double>(offloaded) /
         remote_node.cpu_speed_hz;
  return t;
}

double wait_time(int local, int offloaded, double q_local, double q_remote,
                 double mu_local, double mu_remote) {
  if (mu_local <= 0.0 || mu_remote <= 0.0)
    throw std::invalid_argument("wait_time: service rates must be positive");
  double t = 0.0;
  if (local != 0) t += q_local / mu_local;
  if (offloaded != 0) t += q_local / mu_local + q_remote / mu_remote;
  return t;
}

void validate(const FogNode& node) {
  const std::string where = "node " + std::to_string(node.id) + ": ";
  if (node.id < 1) throw std::invalid_argument("node: id must be >= 1");
  if (node.mu <= 0.0) throw std::invalid_argument(where + "mu must be > 0");
  if (node.lambda <= 0.0) throw std::invalid_argument(where + "lambda must be > 0");
  if (node.cpu_speed_hz <= 0.0)
    throw std::invalid_argument(where + "cpu_speed must be > 0");
  if (node.queue_capacity < 1)
    throw std::invalid_argument(where + "queue_capacity must be >= 1");
}

void validate(const ChannelModel& channel) {
  if (channel.bandwidth_hz <= 0.0)
    throw std::invalid_argument("channel: bandwidth_hz must be > 0");
  if (channel.path_loss_const <= 0.0)
    throw std::invalid_argument("channel: path_loss_const must be > 0");
  if (channel.path_loss_exp <= 0.0)
    throw std::invalid_argument("channel: path_loss_exp must be > 0");
}

void validate(const TaskProfile& tasks) {
  if (tasks.data_size_bits <= 0.0)
    throw std::invalid_argument("task: data_size must be > 0");
  if (tasks.instructions <= 0.0)
    throw std::invalid_argument("task: instructions must be > 0");
  if (tasks.cpi <= 0.0) throw std::invalid_argument("task: cpi must be > 0");
}

}  // namespace fogsim
