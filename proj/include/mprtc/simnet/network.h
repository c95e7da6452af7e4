#ifndef MPRTC_SIMNET_NETWORK_H_
#define MPRTC_SIMNET_NETWORK_H_

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mprtc/simnet/event_loop.h"
#include "mprtc/simnet/link.h"

namespace mprtc {

using LinkId = size_t;

// Ordered list of links from a source endpoint to a destination endpoint.
struct Route {
  std::string name;
  std::vector<LinkId> links;
};

// Owns links and named routes and forwards packets hop by hop.
class Network {
 public:
  using ArrivalFn = std::function<void(SimPacket)>;

  explicit Network(EventLoop* loop) : loop_(loop) {}
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  LinkId AddLink(std::string name, LinkConfig config);
  LinkId AddLink(std::string name, LinkConfig config, TraceSchedule capacity);
  // Throws std::invalid_argument for an empty link list or unknown link ids.
  void AddRoute(std::string name, std::vector<LinkId> links);

  // Forwards the packet along the route; `on_arrival` runs at the far end.
  // A drop on any hop silently ends the packet's journey.
  void Send(const std::string& route, SimPacket packet, ArrivalFn on_arrival);

  bool HasRoute(const std::string& name) const;
  const Route& route(const std::string& name) const;
  Link& link(LinkId id) { return *links_.at(id); }
  const Link& link(LinkId id) const { return *links_.at(id); }
  LinkId link_id(const std::string& name) const;
  size_t link_count() const { return links_.size(); }
  std::vector<std::string> route_names() const;

  // One-way propagation delay summed over the route's links.
  TimeDelta PropagationDelay(const std::string& route) const;
  // Bottleneck capacity along the route at time t.
  DataRate BottleneckAt(const std::string& route, Timestamp t) const;
  // Bottleneck capacity averaged over [from, to).
  DataRate MeanBottleneck(const std::string& route, Timestamp from,
                          Timestamp to) const;
  // Packets dropped for `flow_id` on any link.
  uint64_t DropsForFlow(uint32_t flow_id) const;

  EventLoop* loop() const { return loop_; }

 private:
  void Forward(const Route* route, size_t hop, SimPacket packet,
               std::shared_ptr<ArrivalFn> on_arrival);

  EventLoop* loop_;
  std::vector<std::unique_ptr<Link>> links_;
  std::map<std::string, LinkId> link_ids_;
  std::map<std::string, Route> routes_;
};

}  // namespace mprtc

#endif  // MPRTC_SIMNET_NETWORK_H_
