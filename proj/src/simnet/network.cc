#include "mprtc/simnet/network.h"

#include <algorithm>
#include <stdexcept>

namespace mprtc {

LinkId Network::AddLink(std::string name, LinkConfig config) {
  return AddLink(std::move(name), config, TraceSchedule::Constant(config.capacity));
}

LinkId Network::AddLink(std::string name, LinkConfig config,
                        TraceSchedule capacity) {
  if (link_ids_.count(name)) throw std::invalid_argument("duplicate link " + name);
  const LinkId id = links_.size();
  links_.push_back(
      std::make_unique<Link>(loop_, name, config, std::move(capacity)));
  link_ids_.emplace(std::move(name), id);
  return id;
}

void Network::AddRoute(std::string name, std::vector<LinkId> links) {
  if (links.empty()) throw std::invalid_argument("route " + name + " is empty");
  for (LinkId id : links) {
    if (id >= links_.size())
      throw std::invalid_argument("route " + name + " names unknown link");
  }
  Route r{name, std::move(links)};
  routes_.insert_or_assign(std::move(name), std::move(r));
}

void Network::Send(const std::string& route, SimPacket packet,
                   ArrivalFn on_arrival) {
  Forward(&this->route(route), 0, std::move(packet),
          std::make_shared<ArrivalFn>(std::move(on_arrival)));
}

void Network::Forward(const Route* route, size_t hop, SimPacket packet,
                      std::shared_ptr<ArrivalFn> on_arrival) {
  Link& l = *links_[route->links[hop]];
  if (hop + 1 == route->links.size()) {
    l.Send(std::move(packet), [on_arrival](SimPacket p) { (*on_arrival)(std::move(p)); });
    return;
  }
  l.Send(std::move(packet), [this, route, hop, on_arrival](SimPacket p) {
    Forward(route, hop + 1, std::move(p), on_arrival);
  });
}

bool Network::HasRoute(const std::string& name) const {
  return routes_.count(name) > 0;
}

const Route& Network::route(const std::string& name) const {
  auto it = routes_.find(name);
  if (it == routes_.end()) throw std::out_of_range("unknown route " + name);
  return it->second;
}

LinkId Network::link_id(const std::string& name) const {
  auto it = link_ids_.find(name);
  if (it == link_ids_.end()) throw std::out_of_range("unknown link " + name);
  return it->second;
}

std::vector<std::string> Network::route_names() const {
  std::vector<std::string> names;
  for (const auto& [name, r] : routes_) names.push_back(name);
  return names;
}

TimeDelta Network::PropagationDelay(const std::string& route) const {
  TimeDelta total = TimeDelta::Zero();
  for (LinkId id : this->route(route).links) total += links_[id]->config().owd;
  return total;
}

DataRate Network::BottleneckAt(const std::string& route, Timestamp t) const {
  const auto& ids = this->route(route).links;
  DataRate best = links_[ids.front()]->capacity().CapacityAt(t);
  for (LinkId id : ids) best = std::min(best, links_[id]->capacity().CapacityAt(t));
  return best;
}

DataRate Network::MeanBottleneck(const std::string& route, Timestamp from,
                                 Timestamp to) const {
  // Integrate the pointwise minimum over the union of change points.
  const auto& ids = this->route(route).links;
  if (to <= from) return BottleneckAt(route, from);
  long double bits_us = 0;
  Timestamp t = from;
  while (t < to) {
    Timestamp next = to;
    for (LinkId id : ids)
      next = std::min(next, links_[id]->capacity().NextChangeAfter(t));
    bits_us += static_cast<long double>(BottleneckAt(route, t).bps()) * (next - t).us();
    t = next;
  }
  return DataRate::BitsPerSec(static_cast<int64_t>(
      bits_us / static_cast<long double>((to - from).us())));
}

uint64_t Network::DropsForFlow(uint32_t flow_id) const {
  uint64_t drops = 0;
  for (const auto& l : links_) drops += l->flow_stats(flow_id).packets_dropped;
  return drops;
}

}  // namespace mprtc
