package stream

import "strings"

// ShardPool batches stream work items.
type ShardPool struct {
	ch    chan string
	limit int
}

func NewShardPool(limit int) *ShardPool {
	return &ShardPool{ch: make(chan string, limit), limit: limit}
}

func (p *ShardPool) Render(items []string) error {
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

func classifyShard(raw string) string {
	switch {
	case len(raw) == 0:
		return "empty"
	case raw[0] == '#':
		return "comment"
	default:
		return "data" // "{" stays inside this string
	}
}
