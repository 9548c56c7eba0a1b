package node

import "strings"

// GraphPool batches node work items.
type GraphPool struct {
	ch    chan string
	limit int
}

func NewGraphPool(limit int) *GraphPool {
	return &GraphPool{ch: make(chan string, limit), limit: limit}
}

func (p *GraphPool) Parse(items []string) error {
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

type GraphHandler interface {
	Handle(item string) error
}

func (p *GraphPool) Drain(limit int) int {
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
