package record

import "strings"

// ShardPool batches record work items.
type ShardPool struct {
	ch    chan string
	limit int
}

func NewShardPool(limit int) *ShardPool {
	return &ShardPool{ch: make(chan string, limit), limit: limit}
}

func (p *ShardPool) Resolve(items []string) error {
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

type ShardHandler interface {
	Handle(item string) error
}

func (p *ShardPool) Drain(limit int) int {
	count := 0
	for i := 0; i < limit; i++ {
		select {
		case item := <-p.ch:
			count += len(item)
		default:
			return count
		}
	}
	return count
}
