/**
 * Fleet view-model: one card per AP, derived purely from the last received
 * snapshot, series, and anomaly payloads. The console holds no state of its
 * own — rebuilding from the same payloads always yields the same cards.
 */

import { decimate } from "./format";
import type { AnomalyPayload, Band, SeriesPayload, SnapshotPayload } from "./types";

export interface BandStats {
  band: Band;
  clientCount: number;
  byteRateBps: number; // bytes/s, radio rx+tx
  airtime: number;
  channel: number;
}

export interface FleetCard {
  apId: string;
  name: string;
  locationTag: string;
  lastSeen: string;
  bands: BandStats[];
  totalClients: number;
  totalByteRateBps: number;
  stale: boolean;
  staleDetail: string | null;
  sparkline: number[]; // last byte-rate bins, oldest first
}

export function buildFleet(
  snapshot: SnapshotPayload,
  anomalies: AnomalyPayload[] = [],
  seriesByAp: Record<string, SeriesPayload> = {},
  sparklineBins = 60,
): FleetCard[] {
  const staleByAp = new Map<string, string>();
  for (const anomaly of anomalies) {
    if (anomaly.kind === "STALE_AP") staleByAp.set(anomaly.ap_id, anomaly.detail);
  }

  return snapshot.aps.map((ap) => {
    const bands: BandStats[] = ap.radios.map((radio) => ({
      band: radio.band,
      clientCount: radio.client_count,
      byteRateBps: (radio.rx_rate_bps + radio.tx_rate_bps) / 8,
      airtime: radio.airtime_utilization,
      channel: radio.channel,
    }));
    const series = seriesByAp[ap.ap_id];
    const points = series ? series.points.map(([, value]) => value) : [];
    return {
      apId: ap.ap_id,
      name: ap.name,
      locationTag: ap.location_tag,
      lastSeen: ap.last_seen,
      bands,
      totalClients: bands.reduce((sum, b) => sum + b.clientCount, 0),
      totalByteRateBps: bands.reduce((sum, b) => sum + b.byteRateBps, 0),
      stale: staleByAp.has(ap.ap_id),
      staleDetail: staleByAp.get(ap.ap_id) ?? null,
      sparkline: decimate(points.slice(-sparklineBins)),
    };
  });
}

/** Cross-check a card set against the snapshot it came from. */
export function fleetMatchesSnapshot(cards: FleetCard[], snapshot: SnapshotPayload): boolean {
  if (cards.length !== snapshot.aps.length) return false;
  const clientTotal = cards.reduce((sum, c) => sum + c.totalClients, 0);
  return clientTotal === snapshot.clients.length;
}
