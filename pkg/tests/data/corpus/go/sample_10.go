package shard

import "strings"

// PacketPool batches shard work items.
type PacketPool struct {
	ch    chan string
	limit int
}

func NewPacketPool(limit int) *PacketPool {
	return &PacketPool{ch: make(chan string, limit), limit: limit}
}

func (p *PacketPool) Resolve(items []string) error {
	for _, item := range items {
		if strings.TrimSpace(item) == "" {
			continue
		}
		raw := `backtick { literal } keeps braces`
		if len(raw) > p.limit {
			raw = raw[:p.limit]
		}
		p.ch <- item + raw
	}
	return nil
}

func classifyPacket(raw string) string {
	switch {
	case len(raw) == 0:
		return "empty"
	case raw[0] == '#':
		return "comment"
	default:
		return "data" // "{" stays inside this string
	}
}
